#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "acnote/path.hpp"
#include "acnote/payoff.hpp"
#include "acnote/terms.hpp"

namespace acnote::mc {

// ---------------------------------------------------------------------------
// Market models
// ---------------------------------------------------------------------------

/// Observation-level scenario generator with IID signs: each index return is
/// nonnegative with probability p. When all are negative the trigger is
/// breached with probability b2, and the final return is then drawn from
/// loss_support(b1), whose mean is -b1.
struct IidSignModel {
    double p = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;
};

/// Recombining daily walk: the level is multiplied by `up` with probability
/// q, otherwise by `down`. Small instances can be enumerated exactly.
struct DailyLatticeModel {
    double up = 1.0;
    double down = 1.0;
    double q = 0.5;
    std::size_t days_per_quarter = 2;
};

/// Daily log returns ~ N(mu, sigma^2) over `trading_days` days.
struct GeometricWalkModel {
    double mu = 0.0;
    double sigma = 0.0;
    std::size_t trading_days = 381;
};

/// Like IidSignModel, but the observation signs follow a two-state Markov
/// chain that keeps the previous sign with probability `persistence`. The
/// first sign is nonnegative with probability p. Momentum requires
/// persistence >= 1/2; `allow_euphoria` lifts that restriction.
struct MarkovSignModel {
    double p = 0.0;
    double persistence = 0.5;
    double b1 = 0.0;
    double b2 = 0.0;
    bool allow_euphoria = false;
};

/// Resamples historical daily growth factors (close_i / close_{i-1}) with
/// replacement.
struct BootstrapModel {
    std::vector<double> daily_growth;
    std::size_t trading_days = 381;
};

using MarketModel =
    std::variant<IidSignModel, DailyLatticeModel, GeometricWalkModel, MarkovSignModel, BootstrapModel>;

/// "iid_sign", "daily_lattice", "geometric_walk", "markov_sign", "bootstrap"
std::string model_name(const MarketModel& model);

/// Throws DomainError if any parameter is out of range.
void check(const MarketModel& model);

/// Equally weighted final-return values for the loss case; mean is -b1,
/// every point lies in [-1, 0).
std::vector<double> loss_support(double b1);

/// Builds a bootstrap model from a price history. Throws DomainError when the
/// history has fewer than two closes.
BootstrapModel bootstrap_from_history(const IndexPath& history, std::size_t trading_days = 381);

/// Parses a model spec in the term-sheet `key = value` format:
///
///     model = daily_lattice
///     up = 1.05
///     down = 0.93
///     q = 0.45
///     days_per_quarter = 3
///
/// A relative bootstrap `history` path is resolved against `base_dir`.
MarketModel parse_model_spec(std::string_view text, const std::filesystem::path& base_dir = {});
MarketModel load_model_spec(const std::filesystem::path& file);

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

struct SimulationOptions {
    std::uint64_t seed = 0;
    std::size_t n_paths = 100'000;
    /// Paths per random substream. Results depend on (seed, n_paths, block_size)
    /// and not on the worker count.
    std::size_t block_size = 4096;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned workers = 0;
};

/// One simulated outcome. `levels` holds the daily closes for path models and
/// is empty for the observation-level sign models.
struct Scenario {
    ObservationView view;
    std::vector<double> levels;
};

/// Calls `visit(path_index, scenario)` for each of `options.n_paths` scenarios,
/// in index order, on the calling thread.
void simulate_paths(const MarketModel& model, const NoteTerms& terms, const SimulationOptions& options,
                    const std::function<void(std::size_t, const Scenario&)>& visit);

std::vector<Scenario> simulate_paths(const MarketModel& model, const NoteTerms& terms, std::size_t n,
                                     std::uint64_t seed);

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    double ci95_low = 0.0;
    double ci95_high = 0.0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
    std::size_t block_size = 0;
};

/// Sample mean of the unrounded net payment. Requires n_paths >= 100.
Estimate estimate_expected_payment(const MarketModel& model, const NoteTerms& terms, Interpretation interpretation,
                                   const SimulationOptions& options);

/// Sample analogues of p = P(I_1 >= 0), B1 = -E(I_R | breach, no call),
/// B2 = P(breach | no call) and tau = P(I_R < threshold), with standard errors.
struct ModelParamEstimate {
    double p = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;
    double tau = 0.0;
    double p_se = 0.0;
    double b1_se = 0.0;
    double b2_se = 0.0;
    double tau_se = 0.0;
    std::size_t n_paths = 0;
    std::size_t all_negative_hits = 0;
    std::size_t breach_hits = 0;
};

/// Conditioning events must each be hit at least this many times.
inline constexpr std::size_t kMinConditioningHits = 30;

/// Throws DomainError when {all I_r < 0} or {breach and all I_r < 0} is hit
/// fewer than kMinConditioningHits times.
ModelParamEstimate estimate_model_params(const MarketModel& model, const NoteTerms& terms,
                                         const SimulationOptions& options);

// ---------------------------------------------------------------------------
// Exact oracles
// ---------------------------------------------------------------------------

/// Largest total number of lattice steps enumerate_exact() accepts.
inline constexpr std::size_t kMaxEnumerationSteps = 22;

bool is_enumerable(const DailyLatticeModel& model, const NoteTerms& terms);

/// Exact expectations and event probabilities of a lattice model, by full
/// path enumeration. Conditional quantities are empty when their
/// conditioning event has probability zero.
struct ExactResult {
    double expected_net_a = 0.0;
    double expected_net_b = 0.0;
    double total_probability = 0.0;
    std::size_t paths = 0;

    double p = 0.0;
    double tau = 0.0;
    std::optional<double> b1;
    std::optional<double> b2;

    std::vector<double> q_call_a;
    double q_even_a = 0.0;
    double q_loss_a = 0.0;
    std::vector<double> q_call_b;
    double q_even_b = 0.0;
    double q_hold_b = 0.0;

    double p_all_negative = 0.0;
    /// P(I_r < threshold | all I_j < 0), per observation.
    std::vector<std::optional<double>> p_obs_breach_given_all_negative;
    /// P(d_min < threshold | all I_j < 0).
    std::optional<double> p_breach_given_all_negative;
    /// E(I_R | I_r < threshold, all I_j < 0), per observation r.
    std::vector<std::optional<double>> mean_final_given_obs_breach;
    /// E(I_R | d_min < threshold, all I_j < 0).
    std::optional<double> mean_final_given_breach;

    /// Largest I_R over paths where interpretation A calls but B holds after a
    /// breach; empty if no such path exists.
    std::optional<double> max_final_return_on_divergent_paths;

    double expected_net(Interpretation interpretation) const {
        return interpretation == Interpretation::A ? expected_net_a : expected_net_b;
    }
};

/// Throws DomainError when the lattice has more than kMaxEnumerationSteps steps.
ExactResult enumerate_exact(const DailyLatticeModel& model, const NoteTerms& terms);

/// Exact expected net payments of a sign model over its finite scenario
/// space (sign patterns x breach flag x loss support).
struct SignModelExact {
    double expected_net_a = 0.0;
    double expected_net_b = 0.0;
    double total_probability = 0.0;
};

SignModelExact exact_sign_model_expectation(const MarketModel& model, const NoteTerms& terms);

// ---------------------------------------------------------------------------
// Inequality checks
// ---------------------------------------------------------------------------

struct InequalityCheck {
    enum class Status { holds, fails, not_applicable, reported };

    std::string name;
    /// Human readable "lhs <= rhs" form.
    std::string relation;
    double lhs = 0.0;
    double rhs = 0.0;
    Status status = Status::not_applicable;
};

std::string to_string(InequalityCheck::Status status);

struct InequalityReport {
    std::vector<InequalityCheck> checks;

    /// No asserted check failed. Not-applicable and reported checks are ignored.
    bool all_hold() const;
    std::vector<const InequalityCheck*> by_prefix(std::string_view prefix) const;
    std::string to_text() const;
};

/// Exact evaluation, on an enumerable lattice, of:
///   breach_prob[r]    P(d_min < t | no call) >= P(I_r < t | no call)
///   loss_mean[r]      E(I_R | d_min < t, no call) <= E(I_R | I_r < t, no call)
///   call_prob[r]      P(called at r under B) <= P(called at r under A)
///   expectation_b_a   E[net_B] <= E[net_A]; asserted only when no path where
///                     A calls and B holds has principal * I_R >= smallest coupon
///   tau_bound         E[net_A] <= upper bound at the model's exact (p, tau)
/// where t is the breach threshold and "no call" means all I_j < 0.
InequalityReport verify_inequalities(const DailyLatticeModel& model, const NoteTerms& terms);

} // namespace acnote::mc
