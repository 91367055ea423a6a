#include "acnote/analytic.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "acnote/error.hpp"
#include "acnote/keyvalue.hpp"

namespace acnote {

namespace {

constexpr double kProbabilitySlack = 1e-12;

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

/// sum_r c_r (1-p)^(r-1) p, the expected coupon income.
double call_terms(double p, const CouponLadder& ladder) {
    double survive = 1.0;
    double total = 0.0;
    for (double coupon : ladder.coupons) {
        total += coupon * survive * p;
        survive *= 1.0 - p;
    }
    return total;
}

double ternary(const std::function<double(double)>& f, double lo, double hi, bool maximize) {
    const double sign = maximize ? 1.0 : -1.0;
    while (hi - lo > 1e-6) {
        double m1 = lo + (hi - lo) / 3.0;
        double m2 = hi - (hi - lo) / 3.0;
        if (sign * f(m1) < sign * f(m2)) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

CouponLadder CouponLadder::from_terms(const NoteTerms& terms) {
    return {terms.coupon_dollars(), terms.principal.dollars()};
}

void check(const ScenarioParams& params) {
    if (!in_unit_interval(params.p)) throw DomainError("p must lie in [0, 1]");
    if (!(params.b1 > 0.0 && params.b1 <= 1.0)) throw DomainError("B1 must lie in (0, 1]");
    if (!(params.b2 > 0.0 && params.b2 <= 1.0)) throw DomainError("B2 must lie in (0, 1]");
}

void check(const TauParams& params) {
    if (!in_unit_interval(params.p)) throw DomainError("p must lie in [0, 1]");
    if (!in_unit_interval(params.tau)) throw DomainError("tau must lie in [0, 1]");
}

CaseDistribution iid_case_distribution(const ScenarioParams& params, std::size_t observations) {
    check(params);
    CaseDistribution dist;
    double survive = 1.0;
    for (std::size_t r = 0; r < observations; ++r) {
        dist.q_call.push_back(survive * params.p);
        survive *= 1.0 - params.p;
    }
    dist.q_loss = survive * params.b2;
    dist.q_even = survive * (1.0 - params.b2);
    dist.mean_loss_return = -params.b1;
    return dist;
}

double expected_net_payment_cases(const CaseDistribution& dist, const CouponLadder& ladder) {
    if (dist.q_call.size() != ladder.coupons.size()) {
        throw DomainError("case distribution has " + std::to_string(dist.q_call.size()) + " call cases, ladder has " +
                          std::to_string(ladder.coupons.size()) + " coupons");
    }
    double total_probability = dist.q_even + dist.q_loss;
    double expectation = 0.0;
    for (std::size_t r = 0; r < dist.q_call.size(); ++r) {
        if (!in_unit_interval(dist.q_call[r])) throw DomainError("call probability outside [0, 1]");
        total_probability += dist.q_call[r];
        expectation += ladder.coupons[r] * dist.q_call[r];
    }
    if (!in_unit_interval(dist.q_even) || !in_unit_interval(dist.q_loss)) {
        throw DomainError("case probability outside [0, 1]");
    }
    if (std::abs(total_probability - 1.0) > kProbabilitySlack) {
        throw DomainError("case probabilities sum to " + format_double(total_probability) + ", not 1");
    }
    if (dist.q_loss > 0.0 && !(dist.mean_loss_return >= -1.0 && dist.mean_loss_return < 0.0)) {
        throw DomainError("mean loss return must lie in [-1, 0)");
    }
    if (dist.q_loss > 0.0) expectation += ladder.principal * dist.mean_loss_return * dist.q_loss;
    return expectation;
}

double expected_net_payment_iid(const ScenarioParams& params, const CouponLadder& ladder) {
    check(params);
    const double no_call = std::pow(1.0 - params.p, static_cast<double>(ladder.coupons.size()));
    return call_terms(params.p, ladder) - ladder.principal * params.b1 * params.b2 * no_call;
}

double expected_net_payment_upper_bound(const TauParams& params, const CouponLadder& ladder) {
    check(params);
    const auto observations = static_cast<double>(ladder.coupons.size());
    const double no_call = std::pow(1.0 - params.p, observations - 1.0);
    return call_terms(params.p, ladder) - 0.5 * ladder.principal * no_call * params.tau;
}

Extrema find_extrema(const ExtremaTarget& target, const CouponLadder& ladder, std::size_t resolution) {
    if (resolution < 1000) throw DomainError("extrema search needs a grid of at least 1000 intervals");
    std::function<double(double)> f = std::visit(
        [&](const auto& curve) -> std::function<double(double)> {
            using T = std::decay_t<decltype(curve)>;
            if constexpr (std::is_same_v<T, IidCurve>) {
                ScenarioParams base{0.0, curve.b1, curve.b2};
                check(base);
                return [base, &ladder](double p) {
                    auto params = base;
                    params.p = p;
                    return expected_net_payment_iid(params, ladder);
                };
            } else {
                check(TauParams{0.0, curve.tau});
                return [tau = curve.tau, &ladder](double p) {
                    return expected_net_payment_upper_bound({p, tau}, ladder);
                };
            }
        },
        target);

    const double step = 1.0 / static_cast<double>(resolution);
    std::size_t imax = 0, imin = 0;
    double vmax = f(0.0), vmin = vmax;
    for (std::size_t i = 1; i <= resolution; ++i) {
        double v = f(static_cast<double>(i) * step);
        if (v > vmax) vmax = v, imax = i;
        if (v < vmin) vmin = v, imin = i;
    }

    auto refine = [&](std::size_t index, double grid_value, bool maximize, double& arg, double& value) {
        arg = static_cast<double>(index) * step;
        value = grid_value;
        double lo = index == 0 ? 0.0 : static_cast<double>(index - 1) * step;
        double hi = index == resolution ? 1.0 : static_cast<double>(index + 1) * step;
        double candidate = ternary(f, lo, hi, maximize);
        double cv = f(candidate);
        if (maximize ? cv > value : cv < value) arg = candidate, value = cv;
    };

    Extrema out;
    refine(imax, vmax, true, out.argmax_p, out.max_value);
    refine(imin, vmin, false, out.argmin_p, out.min_value);
    return out;
}

SweepResult sweep(const SweepSpec& spec, const CouponLadder& ladder) {
    if (spec.p_points < 2) throw DomainError("sweep needs at least two p grid points");
    if (spec.mode == SweepMode::surface && spec.tau_points < 2) {
        throw DomainError("surface sweep needs at least two tau grid points");
    }
    SweepResult result;
    result.mode = spec.mode;
    auto grid = [](std::size_t i, std::size_t points) {
        return static_cast<double>(i) / static_cast<double>(points - 1);
    };
    for (std::size_t i = 0; i < spec.p_points; ++i) {
        double p = grid(i, spec.p_points);
        switch (spec.mode) {
        case SweepMode::iid:
            result.rows.push_back({p, 0.0, expected_net_payment_iid({p, spec.b1, spec.b2}, ladder)});
            break;
        case SweepMode::bound:
            result.rows.push_back({p, spec.tau, expected_net_payment_upper_bound({p, spec.tau}, ladder)});
            break;
        case SweepMode::surface:
            for (std::size_t j = 0; j < spec.tau_points; ++j) {
                double tau = grid(j, spec.tau_points);
                if (p + tau > 1.0 + kProbabilitySlack) continue;
                result.rows.push_back({p, tau, expected_net_payment_upper_bound({p, tau}, ladder)});
            }
            break;
        }
    }
    result.max = result.min = result.rows.front();
    for (const auto& row : result.rows) {
        if (row.value > result.max.value) result.max = row;
        if (row.value < result.min.value) result.min = row;
    }
    return result;
}

std::string to_csv(const SweepResult& result) {
    const bool with_tau = result.mode == SweepMode::surface;
    std::ostringstream out;
    char buf[128];
    out << (with_tau ? "p,tau,expected_net_payment\n" : "p,expected_net_payment\n");
    auto row_text = [&](const SweepRow& row) {
        if (with_tau) {
            std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f", row.p, row.tau, row.value);
        } else {
            std::snprintf(buf, sizeof buf, "%.6f,%.6f", row.p, row.value);
        }
        return std::string(buf);
    };
    for (const auto& row : result.rows) out << row_text(row) << '\n';
    out << "# max," << row_text(result.max) << '\n';
    out << "# min," << row_text(result.min) << '\n';
    return out.str();
}

} // namespace acnote
