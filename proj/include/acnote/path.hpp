#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "acnote/date.hpp"
#include "acnote/terms.hpp"

namespace acnote {

struct PriceEntry {
    Date date;
    double close = 0.0;
};

/// Daily closing levels of the reference index, measured against a fixed
/// starting level.
class IndexPath {
public:
    /// Throws DomainError unless dates are strictly increasing, every close is
    /// positive, and `start_level` is positive.
    IndexPath(std::vector<PriceEntry> entries, double start_level);

    const std::vector<PriceEntry>& entries() const { return entries_; }
    double start_level() const { return start_level_; }
    std::size_t size() const { return entries_.size(); }

private:
    std::vector<PriceEntry> entries_;
    double start_level_;
};

/// Index return and running minimum of the cumulative daily return at each
/// call observation. `running_min` is nonincreasing and never exceeds the
/// matching `index_return`.
struct ObservationView {
    std::vector<double> index_return;
    std::vector<double> running_min;

    std::size_t observation_count() const { return index_return.size(); }
    double final_return() const { return index_return.back(); }
    double overall_min() const { return running_min.back(); }
};

/// (close - start) / start for each entry, in entry order.
std::vector<double> cumulative_returns(const IndexPath& path);

/// Builds the observation view from a level series. `observation_indices`
/// are positions into `levels`, strictly increasing. Running minima cover
/// every level up to and including each observation.
ObservationView view_from_levels(std::span<const double> levels, double start_level,
                                 std::span<const std::size_t> observation_indices);

/// Index returns on the note's observation dates. Only entries dated on or
/// after the trade date count towards the running minima. Throws DomainError
/// naming the first observation date absent from the path; no interpolation.
ObservationView observe(const IndexPath& path, const NoteTerms& terms);

/// First date in [trade_date, final_valuation_date] whose close is strictly
/// below the trigger level.
std::optional<Date> breach_date(const IndexPath& path, const NoteTerms& terms);

/// Reads `date,close` CSV (header required, ascending dates). Throws
/// DomainError on malformed content and IoError if the file cannot be read.
IndexPath read_prices_csv(std::istream& in, double start_level);
IndexPath read_prices_csv_file(const std::string& file, double start_level);

} // namespace acnote
