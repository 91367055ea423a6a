#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <vector>

#include "acnote/path.hpp"
#include "acnote/terms.hpp"

namespace acnote::testing {

inline Date day(int y, unsigned m, unsigned d) {
    return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

inline Date add_days(Date date, int days) {
    return Date{std::chrono::sys_days{date} + std::chrono::days{days}};
}

inline const std::vector<double>& table_closes() {
    static const std::vector<double> closes{365.48, 302.05, 201.77, 121.51, 155.52, 189.37};
    return closes;
}

/// Reference note with observations every `days_per_quarter` calendar days
/// after the trade date, so a daily path of 6k entries lines up with it.
inline NoteTerms compact_terms(int days_per_quarter) {
    NoteTerms terms = reference_note_terms();
    for (std::size_t r = 0; r < terms.observations.size(); ++r) {
        terms.observations[r].date = add_days(terms.trade_date, days_per_quarter * static_cast<int>(r + 1));
    }
    terms.final_valuation_date = terms.observations.back().date;
    terms.maturity_date = add_days(terms.final_valuation_date, 5);
    terms.settlement_date.reset();
    return terms;
}

/// Daily path starting the day after the trade date, one close per day.
inline IndexPath daily_path(const NoteTerms& terms, const std::vector<double>& closes) {
    std::vector<PriceEntry> entries;
    for (std::size_t i = 0; i < closes.size(); ++i) {
        entries.push_back({add_days(terms.trade_date, static_cast<int>(i + 1)), closes[i]});
    }
    return IndexPath(std::move(entries), terms.index_starting_level);
}

/// Net payment read straight off the case lists, without the library engine.
struct CaseOracle {
    std::vector<double> coupons;
    double principal = 10.0;
    double threshold = -0.5;

    /// Any nonnegative observation calls; otherwise the overall minimum decides.
    double net_a(const std::vector<double>& returns, double d_min) const {
        for (std::size_t r = 0; r < returns.size(); ++r) {
            if (returns[r] >= 0.0) return coupons[r];
        }
        return d_min < threshold ? principal * returns.back() : 0.0;
    }

    /// A call at the first nonnegative observation stands only if the first
    /// breaching observation period does not come earlier.
    double net_b(const std::vector<double>& returns, const std::vector<double>& running_min) const {
        std::size_t first_up = returns.size();
        std::size_t first_breach = returns.size();
        for (std::size_t r = returns.size(); r-- > 0;) {
            if (returns[r] >= 0.0) first_up = r;
            if (running_min[r] < threshold) first_breach = r;
        }
        if (first_up < returns.size() && first_breach >= first_up) return coupons[first_up];
        if (first_breach < returns.size()) return principal * returns.back();
        return 0.0;
    }
};

/// Every path of a daily binomial lattice, with its probability and the
/// observation-level returns and running minima.
struct LatticePath {
    double probability = 0.0;
    std::vector<double> returns;
    std::vector<double> running_min;
};

inline std::vector<LatticePath> brute_force_lattice(double up, double down, double q, int days_per_quarter,
                                                    int quarters = 6) {
    const int steps = days_per_quarter * quarters;
    std::vector<LatticePath> out;
    for (std::uint32_t mask = 0; mask < (1u << steps); ++mask) {
        LatticePath path;
        path.probability = 1.0;
        double level = 1.0;
        double low = 0.0;
        for (int i = 0; i < steps; ++i) {
            bool is_up = (mask >> i) & 1u;
            level *= is_up ? up : down;
            path.probability *= is_up ? q : 1.0 - q;
            low = std::min(low, level - 1.0);
            if ((i + 1) % days_per_quarter == 0) {
                path.returns.push_back(level - 1.0);
                path.running_min.push_back(low);
            }
        }
        if (path.probability > 0.0) out.push_back(std::move(path));
    }
    return out;
}

} // namespace acnote::testing
