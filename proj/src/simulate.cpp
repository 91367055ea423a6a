#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "acnote/error.hpp"
#include "acnote/montecarlo.hpp"
#include "sign_scenario.hpp"

namespace acnote::mc {

namespace {

/// Independent substream for one block of paths.
std::mt19937_64 block_engine(std::uint64_t seed, std::uint64_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    return std::mt19937_64(seq);
}

/// Observation positions for a daily path of `days` levels and R quarters.
std::vector<std::size_t> quarter_ends(std::size_t days, std::size_t observations) {
    if (days < observations) {
        throw DomainError("path of " + std::to_string(days) + " days cannot hold " + std::to_string(observations) +
                          " observations");
    }
    std::vector<std::size_t> out;
    for (std::size_t r = 1; r <= observations; ++r) {
        auto end = std::llround(static_cast<double>(r * days) / static_cast<double>(observations));
        out.push_back(static_cast<std::size_t>(end) - 1);
    }
    return out;
}

class ScenarioSource {
public:
    ScenarioSource(const MarketModel& model, const NoteTerms& terms)
        : model_(model),
          observations_(terms.observations.size()),
          start_(terms.index_starting_level),
          threshold_(terms.breach_threshold()) {
        check(model_);
        if (observations_ == 0) throw DomainError("terms have no observations");
        std::visit(
            [this](const auto& m) {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, DailyLatticeModel>) {
                    for (std::size_t r = 1; r <= observations_; ++r) obs_index_.push_back(r * m.days_per_quarter - 1);
                } else if constexpr (std::is_same_v<T, GeometricWalkModel> || std::is_same_v<T, BootstrapModel>) {
                    obs_index_ = quarter_ends(m.trading_days, observations_);
                } else {
                    loss_points_ = loss_support(m.b1);
                }
            },
            model_);
        returns_.resize(observations_);
    }

    void next(std::mt19937_64& engine, Scenario& out) {
        std::visit([&](const auto& m) { generate(m, engine, out); }, model_);
    }

private:
    void generate(const IidSignModel& m, std::mt19937_64& engine, Scenario& out) {
        bool all_negative = true;
        for (std::size_t r = 0; r < observations_; ++r) {
            bool nonnegative = uniform_(engine) < m.p;
            returns_[r] = sign_magnitude(nonnegative, engine);
            all_negative = all_negative && !nonnegative;
        }
        finish_sign_scenario(all_negative, m.b2, engine, out);
    }

    void generate(const MarkovSignModel& m, std::mt19937_64& engine, Scenario& out) {
        bool all_negative = true;
        bool nonnegative = false;
        for (std::size_t r = 0; r < observations_; ++r) {
            double u = uniform_(engine);
            nonnegative = r == 0 ? u < m.p : (u < m.persistence ? nonnegative : !nonnegative);
            returns_[r] = sign_magnitude(nonnegative, engine);
            all_negative = all_negative && !nonnegative;
        }
        finish_sign_scenario(all_negative, m.b2, engine, out);
    }

    void generate(const DailyLatticeModel& m, std::mt19937_64& engine, Scenario& out) {
        out.levels.resize(observations_ * m.days_per_quarter);
        double level = start_;
        for (auto& v : out.levels) {
            level *= uniform_(engine) < m.q ? m.up : m.down;
            v = level;
        }
        out.view = view_from_levels(out.levels, start_, obs_index_);
    }

    void generate(const GeometricWalkModel& m, std::mt19937_64& engine, Scenario& out) {
        out.levels.resize(m.trading_days);
        double log_return = 0.0;
        for (auto& v : out.levels) {
            log_return += m.mu + m.sigma * normal_(engine);
            v = start_ * std::exp(log_return);
        }
        out.view = view_from_levels(out.levels, start_, obs_index_);
    }

    void generate(const BootstrapModel& m, std::mt19937_64& engine, Scenario& out) {
        out.levels.resize(m.trading_days);
        std::uniform_int_distribution<std::size_t> pick(0, m.daily_growth.size() - 1);
        double level = start_;
        for (auto& v : out.levels) {
            level *= m.daily_growth[pick(engine)];
            v = level;
        }
        out.view = view_from_levels(out.levels, start_, obs_index_);
    }

    /// Nonnegative returns land in [0, |t|), negative ones in [t, 0).
    double sign_magnitude(bool nonnegative, std::mt19937_64& engine) {
        double u = uniform_(engine);
        return nonnegative ? -threshold_ * u : threshold_ * (1.0 - u);
    }

    void finish_sign_scenario(bool all_negative, double b2, std::mt19937_64& engine, Scenario& out) {
        bool breach = false;
        double u = uniform_(engine);
        std::size_t loss_index = std::min<std::size_t>(static_cast<std::size_t>(uniform_(engine) * 5.0), 4);
        if (all_negative && u < b2) {
            breach = true;
            returns_.back() = loss_points_[loss_index];
        }
        out.levels.clear();
        detail::build_sign_view(returns_, breach, threshold_, out.view);
    }

    const MarketModel& model_;
    std::size_t observations_;
    double start_;
    double threshold_;
    std::vector<std::size_t> obs_index_;
    std::vector<double> loss_points_;
    std::vector<double> returns_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Runs every block, possibly on several threads, and returns one
/// accumulator per block in block order.
template <class Acc, class Fn>
std::vector<Acc> run_blocks(const MarketModel& model, const NoteTerms& terms, const SimulationOptions& options,
                            Fn per_scenario) {
    if (options.block_size == 0) throw DomainError("block size must be positive");
    ScenarioSource probe(model, terms);  // validates before any thread starts
    const std::size_t blocks = (options.n_paths + options.block_size - 1) / options.block_size;
    std::vector<Acc> results(blocks);

    auto run_block = [&](std::size_t b) {
        ScenarioSource source(model, terms);
        auto engine = block_engine(options.seed, b);
        Scenario scenario;
        std::size_t first = b * options.block_size;
        std::size_t last = std::min(options.n_paths, first + options.block_size);
        for (std::size_t i = first; i < last; ++i) {
            source.next(engine, scenario);
            per_scenario(results[b], scenario);
        }
    };

    unsigned workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, blocks));
    if (workers <= 1) {
        for (std::size_t b = 0; b < blocks; ++b) run_block(b);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t b = next++; b < blocks; b = next++) run_block(b);
        });
    }
    pool.clear();
    return results;
}

/// Count, mean and centered sum of squares; merged with Chan's update.
struct Moments {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }

    void merge(const Moments& other) {
        if (other.n == 0) return;
        if (n == 0) {
            *this = other;
            return;
        }
        double total = static_cast<double>(n + other.n);
        double delta = other.mean - mean;
        mean += delta * static_cast<double>(other.n) / total;
        m2 += other.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(other.n) / total;
        n += other.n;
    }

    double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

double binomial_se(double p, std::size_t n) {
    return n ? std::sqrt(p * (1.0 - p) / static_cast<double>(n)) : 0.0;
}

} // namespace

void simulate_paths(const MarketModel& model, const NoteTerms& terms, const SimulationOptions& options,
                    const std::function<void(std::size_t, const Scenario&)>& visit) {
    if (options.n_paths == 0) throw DomainError("need at least one path");
    if (options.block_size == 0) throw DomainError("block size must be positive");
    ScenarioSource source(model, terms);
    Scenario scenario;
    const std::size_t blocks = (options.n_paths + options.block_size - 1) / options.block_size;
    for (std::size_t b = 0; b < blocks; ++b) {
        auto engine = block_engine(options.seed, b);
        std::size_t first = b * options.block_size;
        std::size_t last = std::min(options.n_paths, first + options.block_size);
        for (std::size_t i = first; i < last; ++i) {
            source.next(engine, scenario);
            visit(i, scenario);
        }
    }
}

std::vector<Scenario> simulate_paths(const MarketModel& model, const NoteTerms& terms, std::size_t n,
                                     std::uint64_t seed) {
    std::vector<Scenario> out;
    out.reserve(n);
    SimulationOptions options;
    options.seed = seed;
    options.n_paths = n;
    simulate_paths(model, terms, options, [&](std::size_t, const Scenario& s) { out.push_back(s); });
    return out;
}

Estimate estimate_expected_payment(const MarketModel& model, const NoteTerms& terms, Interpretation interpretation,
                                   const SimulationOptions& options) {
    if (options.n_paths < 100) throw DomainError("estimate needs at least 100 paths");
    auto blocks = run_blocks<Moments>(model, terms, options, [&](Moments& acc, const Scenario& s) {
        acc.add(payoff(interpretation, terms, s.view).net_amount);
    });
    Moments total;
    for (const auto& b : blocks) total.merge(b);

    Estimate out;
    out.mean = total.mean;
    out.std_error = std::sqrt(total.variance() / static_cast<double>(total.n));
    out.ci95_low = out.mean - 1.96 * out.std_error;
    out.ci95_high = out.mean + 1.96 * out.std_error;
    out.n_paths = total.n;
    out.seed = options.seed;
    out.block_size = options.block_size;
    return out;
}

ModelParamEstimate estimate_model_params(const MarketModel& model, const NoteTerms& terms,
                                         const SimulationOptions& options) {
    struct Counts {
        std::size_t n = 0;
        std::size_t first_nonnegative = 0;
        std::size_t final_below = 0;
        std::size_t all_negative = 0;
        Moments loss;  // I_R on {breach, all negative}
    };
    const double threshold = terms.breach_threshold();
    auto blocks = run_blocks<Counts>(model, terms, options, [&](Counts& acc, const Scenario& s) {
        const auto& v = s.view;
        ++acc.n;
        if (v.index_return.front() >= 0.0) ++acc.first_nonnegative;
        if (v.final_return() < threshold) ++acc.final_below;
        bool all_negative = std::all_of(v.index_return.begin(), v.index_return.end(), [](double x) { return x < 0.0; });
        if (all_negative) {
            ++acc.all_negative;
            if (v.overall_min() < threshold) acc.loss.add(v.final_return());
        }
    });
    Counts total;
    for (const auto& b : blocks) {
        total.n += b.n;
        total.first_nonnegative += b.first_nonnegative;
        total.final_below += b.final_below;
        total.all_negative += b.all_negative;
        total.loss.merge(b.loss);
    }
    if (total.all_negative < kMinConditioningHits) {
        throw DomainError("conditioning event {all index returns negative} hit " + std::to_string(total.all_negative) +
                          " times; need " + std::to_string(kMinConditioningHits));
    }
    if (total.loss.n < kMinConditioningHits) {
        throw DomainError("conditioning event {trigger breached, all index returns negative} hit " +
                          std::to_string(total.loss.n) + " times; need " + std::to_string(kMinConditioningHits));
    }

    ModelParamEstimate out;
    const double n = static_cast<double>(total.n);
    out.n_paths = total.n;
    out.all_negative_hits = total.all_negative;
    out.breach_hits = total.loss.n;
    out.p = static_cast<double>(total.first_nonnegative) / n;
    out.tau = static_cast<double>(total.final_below) / n;
    out.b2 = static_cast<double>(total.loss.n) / static_cast<double>(total.all_negative);
    out.b1 = -total.loss.mean;
    out.p_se = binomial_se(out.p, total.n);
    out.tau_se = binomial_se(out.tau, total.n);
    out.b2_se = binomial_se(out.b2, total.all_negative);
    out.b1_se = std::sqrt(total.loss.variance() / static_cast<double>(total.loss.n));
    return out;
}

} // namespace acnote::mc
