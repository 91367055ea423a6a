#pragma once

#include <algorithm>
#include <limits>
#include <span>

#include "acnote/path.hpp"

namespace acnote::mc::detail {

/// Observation view of a sign-model scenario. Daily minima are taken to sit
/// on the observation dates, except that a breach drops the final running
/// minimum below the threshold, midway between it and -1.
inline void build_sign_view(std::span<const double> returns, bool breach, double threshold, ObservationView& view) {
    view.index_return.assign(returns.begin(), returns.end());
    view.running_min.resize(returns.size());
    double running = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < returns.size(); ++r) {
        running = std::min(running, returns[r]);
        view.running_min[r] = running;
    }
    if (breach) {
        view.running_min.back() = std::min(view.running_min.back(), 0.5 * (threshold - 1.0));
    }
}

} // namespace acnote::mc::detail
