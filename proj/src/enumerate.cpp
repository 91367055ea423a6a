#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "acnote/analytic.hpp"
#include "acnote/error.hpp"
#include "acnote/montecarlo.hpp"
#include "sign_scenario.hpp"

namespace acnote::mc {

namespace {

constexpr double kSlack = 1e-12;

/// Depth-first walk over every up/down sequence of a lattice, handing each
/// complete path and its probability to the accumulator.
class LatticeWalker {
public:
    LatticeWalker(const DailyLatticeModel& model, const NoteTerms& terms)
        : model_(model), terms_(terms), levels_(terms.observations.size() * model.days_per_quarter) {
        for (std::size_t r = 1; r <= terms.observations.size(); ++r) {
            obs_index_.push_back(r * model.days_per_quarter - 1);
        }
    }

    template <class Leaf>
    void run(Leaf&& leaf) {
        descend(0, terms_.index_starting_level, 1.0, leaf);
    }

private:
    template <class Leaf>
    void descend(std::size_t step, double level, double probability, Leaf& leaf) {
        if (step == levels_.size()) {
            auto view = view_from_levels(levels_, terms_.index_starting_level, obs_index_);
            leaf(view, probability);
            return;
        }
        if (model_.q > 0.0) {
            levels_[step] = level * model_.up;
            descend(step + 1, levels_[step], probability * model_.q, leaf);
        }
        if (model_.q < 1.0) {
            levels_[step] = level * model_.down;
            descend(step + 1, levels_[step], probability * (1.0 - model_.q), leaf);
        }
    }

    const DailyLatticeModel& model_;
    const NoteTerms& terms_;
    std::vector<double> levels_;
    std::vector<std::size_t> obs_index_;
};

std::optional<double> ratio(double numerator, double denominator) {
    if (denominator <= 0.0) return std::nullopt;
    return numerator / denominator;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10f", x);
    return buf;
}

} // namespace

bool is_enumerable(const DailyLatticeModel& model, const NoteTerms& terms) {
    return model.days_per_quarter * terms.observations.size() <= kMaxEnumerationSteps;
}

ExactResult enumerate_exact(const DailyLatticeModel& model, const NoteTerms& terms) {
    check(MarketModel{model});
    if (!is_enumerable(model, terms)) {
        throw DomainError("lattice has " + std::to_string(model.days_per_quarter * terms.observations.size()) +
                          " steps; exact enumeration is limited to " + std::to_string(kMaxEnumerationSteps));
    }
    const std::size_t R = terms.observations.size();
    const double threshold = terms.breach_threshold();

    ExactResult out;
    out.q_call_a.assign(R, 0.0);
    out.q_call_b.assign(R, 0.0);
    std::vector<double> obs_breach(R, 0.0);
    std::vector<double> obs_breach_final(R, 0.0);
    double breach_mass = 0.0;
    double breach_final = 0.0;
    // Up to 4M terms; extended precision keeps the sums exact to double rounding.
    long double total = 0.0L, net_a = 0.0L, net_b = 0.0L;

    LatticeWalker walker(model, terms);
    walker.run([&](const ObservationView& view, double pr) {
        auto a = payoff_interpretation_a(terms, view);
        auto b = payoff_interpretation_b(terms, view);
        const double final_return = view.final_return();
        ++out.paths;
        total += pr;
        net_a += static_cast<long double>(pr) * a.net_amount;
        net_b += static_cast<long double>(pr) * b.net_amount;
        if (view.index_return.front() >= 0.0) out.p += pr;
        if (final_return < threshold) out.tau += pr;

        switch (a.resolution.kind) {
        case ResolutionKind::called: out.q_call_a[a.resolution.observation - 1] += pr; break;
        case ResolutionKind::break_even: out.q_even_a += pr; break;
        default: out.q_loss_a += pr; break;
        }
        switch (b.resolution.kind) {
        case ResolutionKind::called: out.q_call_b[b.resolution.observation - 1] += pr; break;
        case ResolutionKind::break_even: out.q_even_b += pr; break;
        default: out.q_hold_b += pr; break;
        }
        if (a.is_called() && b.resolution.kind == ResolutionKind::post_breach_hold) {
            out.max_final_return_on_divergent_paths =
                std::max(out.max_final_return_on_divergent_paths.value_or(final_return), final_return);
        }

        bool all_negative = std::all_of(view.index_return.begin(), view.index_return.end(),
                                        [](double x) { return x < 0.0; });
        if (!all_negative) return;
        out.p_all_negative += pr;
        for (std::size_t r = 0; r < R; ++r) {
            if (view.index_return[r] < threshold) {
                obs_breach[r] += pr;
                obs_breach_final[r] += pr * final_return;
            }
        }
        if (view.overall_min() < threshold) {
            breach_mass += pr;
            breach_final += pr * final_return;
        }
    });
    out.total_probability = static_cast<double>(total);
    out.expected_net_a = static_cast<double>(net_a);
    out.expected_net_b = static_cast<double>(net_b);

    for (std::size_t r = 0; r < R; ++r) {
        out.p_obs_breach_given_all_negative.push_back(ratio(obs_breach[r], out.p_all_negative));
        out.mean_final_given_obs_breach.push_back(ratio(obs_breach_final[r], obs_breach[r]));
    }
    out.p_breach_given_all_negative = ratio(breach_mass, out.p_all_negative);
    out.mean_final_given_breach = ratio(breach_final, breach_mass);
    out.b2 = out.p_breach_given_all_negative;
    if (out.mean_final_given_breach) out.b1 = -*out.mean_final_given_breach;
    return out;
}

SignModelExact exact_sign_model_expectation(const MarketModel& model, const NoteTerms& terms) {
    check(model);
    const IidSignModel* iid = std::get_if<IidSignModel>(&model);
    const MarkovSignModel* markov = std::get_if<MarkovSignModel>(&model);
    if (!iid && !markov) throw DomainError("exact scenario enumeration needs an iid_sign or markov_sign model");

    const std::size_t R = terms.observations.size();
    if (R > 24) throw DomainError("too many observations for sign-pattern enumeration");
    const double threshold = terms.breach_threshold();
    const double b1 = iid ? iid->b1 : markov->b1;
    const double b2 = iid ? iid->b2 : markov->b2;
    const auto losses = loss_support(b1);

    SignModelExact out;
    std::vector<double> returns(R);
    ObservationView view;
    auto accumulate = [&](double pr, bool breach) {
        detail::build_sign_view(returns, breach, threshold, view);
        out.expected_net_a += pr * payoff_interpretation_a(terms, view).net_amount;
        out.expected_net_b += pr * payoff_interpretation_b(terms, view).net_amount;
        out.total_probability += pr;
    };

    for (std::uint64_t pattern = 0; pattern < (std::uint64_t{1} << R); ++pattern) {
        double pr = 1.0;
        bool previous = false;
        for (std::size_t r = 0; r < R; ++r) {
            bool nonnegative = (pattern >> r) & 1u;
            double p_nonneg = iid ? iid->p
                              : r == 0 ? markov->p
                              : previous ? markov->persistence
                                         : 1.0 - markov->persistence;
            pr *= nonnegative ? p_nonneg : 1.0 - p_nonneg;
            returns[r] = nonnegative ? -0.5 * threshold : 0.5 * threshold;
            previous = nonnegative;
        }
        if (pr == 0.0) continue;
        if (pattern != 0) {
            accumulate(pr, false);
            continue;
        }
        accumulate(pr * (1.0 - b2), false);
        for (double loss : losses) {
            returns.back() = loss;
            accumulate(pr * b2 / static_cast<double>(losses.size()), true);
        }
    }
    return out;
}

std::string to_string(InequalityCheck::Status status) {
    switch (status) {
    case InequalityCheck::Status::holds: return "holds";
    case InequalityCheck::Status::fails: return "FAILS";
    case InequalityCheck::Status::not_applicable: return "n/a";
    case InequalityCheck::Status::reported: return "reported";
    }
    return "?";
}

bool InequalityReport::all_hold() const {
    return std::none_of(checks.begin(), checks.end(),
                        [](const InequalityCheck& c) { return c.status == InequalityCheck::Status::fails; });
}

std::vector<const InequalityCheck*> InequalityReport::by_prefix(std::string_view prefix) const {
    std::vector<const InequalityCheck*> out;
    for (const auto& c : checks) {
        if (std::string_view(c.name).substr(0, prefix.size()) == prefix) out.push_back(&c);
    }
    return out;
}

std::string InequalityReport::to_text() const {
    std::ostringstream out;
    for (const auto& c : checks) {
        out << "  " << c.name << ": " << c.relation;
        if (c.status != InequalityCheck::Status::not_applicable) {
            out << "  [" << fmt(c.lhs) << " vs " << fmt(c.rhs) << "]";
        }
        out << "  " << to_string(c.status) << '\n';
    }
    return out.str();
}

InequalityReport verify_inequalities(const DailyLatticeModel& model, const NoteTerms& terms) {
    const auto exact = enumerate_exact(model, terms);
    const std::size_t R = terms.observations.size();
    InequalityReport report;

    auto le = [](double lhs, double rhs) {
        return lhs <= rhs + kSlack ? InequalityCheck::Status::holds : InequalityCheck::Status::fails;
    };
    auto tag = [](const char* name, std::size_t r) { return std::string(name) + "[" + std::to_string(r + 1) + "]"; };

    for (std::size_t r = 0; r < R; ++r) {
        InequalityCheck c{tag("breach_prob", r),
                          "P(I_" + std::to_string(r + 1) + " < t | no call) <= P(d_min < t | no call)"};
        if (exact.p_breach_given_all_negative && exact.p_obs_breach_given_all_negative[r]) {
            c.lhs = *exact.p_obs_breach_given_all_negative[r];
            c.rhs = *exact.p_breach_given_all_negative;
            c.status = le(c.lhs, c.rhs);
        }
        report.checks.push_back(c);
    }
    for (std::size_t r = 0; r < R; ++r) {
        InequalityCheck c{tag("loss_mean", r),
                          "E(I_R | d_min < t, no call) <= E(I_R | I_" + std::to_string(r + 1) + " < t, no call)"};
        if (exact.mean_final_given_breach && exact.mean_final_given_obs_breach[r]) {
            c.lhs = *exact.mean_final_given_breach;
            c.rhs = *exact.mean_final_given_obs_breach[r];
            c.status = le(c.lhs, c.rhs);
        }
        report.checks.push_back(c);
    }
    for (std::size_t r = 0; r < R; ++r) {
        InequalityCheck c{tag("call_prob", r),
                          "P(called at " + std::to_string(r + 1) + " | B) <= P(called at " + std::to_string(r + 1) +
                              " | A)"};
        c.lhs = exact.q_call_b[r];
        c.rhs = exact.q_call_a[r];
        c.status = le(c.lhs, c.rhs);
        report.checks.push_back(c);
    }
    {
        InequalityCheck c{"expectation_b_a", "E[net_B] <= E[net_A]"};
        c.lhs = exact.expected_net_b;
        c.rhs = exact.expected_net_a;
        const double smallest_coupon = terms.observations.front().coupon_net.dollars();
        const double principal = terms.principal.dollars();
        bool recovery_can_win = exact.max_final_return_on_divergent_paths &&
                                principal * *exact.max_final_return_on_divergent_paths >= smallest_coupon;
        c.status = recovery_can_win ? InequalityCheck::Status::reported : le(c.lhs, c.rhs);
        report.checks.push_back(c);
    }
    {
        InequalityCheck c{"tau_bound", "E[net_A] <= upper bound at exact (p, tau)"};
        c.lhs = exact.expected_net_a;
        c.rhs = expected_net_payment_upper_bound({exact.p, exact.tau}, CouponLadder::from_terms(terms));
        c.status = le(c.lhs, c.rhs);
        report.checks.push_back(c);
    }
    return report;
}

} // namespace acnote::mc
