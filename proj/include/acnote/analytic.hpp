#pragma once

#include <string>
#include <variant>
#include <vector>

#include "acnote/terms.hpp"

namespace acnote {

/// Call coupons (dollars, one per observation) and principal that the
/// closed-form expressions are evaluated against.
struct CouponLadder {
    std::vector<double> coupons;
    double principal = 10.0;

    static CouponLadder from_terms(const NoteTerms& terms);
};

/// Call probability p and the conditional loss parameters B1 (minus the mean
/// final return given a breach and no call) and B2 (breach probability given
/// no call).
struct ScenarioParams {
    double p = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;
};

/// Call probability p and tau = P(final index return below the breach threshold).
struct TauParams {
    double p = 0.0;
    double tau = 0.0;
};

/// Throw DomainError when a parameter leaves its domain.
void check(const ScenarioParams& params);
void check(const TauParams& params);

/// Probabilities of every settlement case of interpretation A, and the mean
/// final index return on the loss case.
struct CaseDistribution {
    std::vector<double> q_call;
    double q_even = 0.0;
    double q_loss = 0.0;
    double mean_loss_return = 0.0;
};

/// Case probabilities implied by IID observation signs.
CaseDistribution iid_case_distribution(const ScenarioParams& params, std::size_t observations);

/// Law of total expectation over the settlement cases. Throws DomainError if
/// the probabilities are out of range or do not sum to one within 1e-12.
double expected_net_payment_cases(const CaseDistribution& dist, const CouponLadder& ladder);

/// Closed-form expectation under IID observation returns:
///   sum_r c_r (1-p)^(r-1) p  -  principal * B1 * B2 * (1-p)^R
double expected_net_payment_iid(const ScenarioParams& params, const CouponLadder& ladder);

/// Upper bound on the IID expectation that depends on tau only:
///   sum_r c_r (1-p)^(r-1) p  -  (principal / 2) * (1-p)^(R-1) * tau
double expected_net_payment_upper_bound(const TauParams& params, const CouponLadder& ladder);

struct IidCurve {
    double b1 = 0.0;
    double b2 = 0.0;
};
struct BoundCurve {
    double tau = 0.0;
};
using ExtremaTarget = std::variant<IidCurve, BoundCurve>;

struct Extrema {
    double argmax_p = 0.0;
    double max_value = 0.0;
    double argmin_p = 0.0;
    double min_value = 0.0;
};

/// Extrema over p in [0, 1]: a uniform grid of `resolution` intervals, then a
/// ternary search on the two cells around each grid optimum down to 1e-6.
/// Grid points stay candidates, so endpoint optima are reported exactly.
/// Throws DomainError for resolution < 1000.
Extrema find_extrema(const ExtremaTarget& target, const CouponLadder& ladder, std::size_t resolution = 10'000);

enum class SweepMode { iid, bound, surface };

struct SweepSpec {
    SweepMode mode = SweepMode::iid;
    /// Grid points over p in [0, 1], endpoints included.
    std::size_t p_points = 101;
    /// Grid points over tau in [0, 1]; surface mode only.
    std::size_t tau_points = 101;
    double b1 = 0.0;
    double b2 = 0.0;
    double tau = 0.0;
};

struct SweepRow {
    double p = 0.0;
    double tau = 0.0;
    double value = 0.0;
};

struct SweepResult {
    SweepMode mode = SweepMode::iid;
    /// Sorted by p, then tau. Surface cells with p + tau > 1 are skipped.
    std::vector<SweepRow> rows;
    SweepRow max;
    SweepRow min;
};

SweepResult sweep(const SweepSpec& spec, const CouponLadder& ladder);

/// CSV with header `p[,tau],expected_net_payment`, six decimals, and two
/// trailing `#` comment lines giving the grid maximum and minimum.
std::string to_csv(const SweepResult& result);

} // namespace acnote
