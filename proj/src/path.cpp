#include "acnote/path.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>

#include "acnote/error.hpp"
#include "acnote/keyvalue.hpp"

namespace acnote {

IndexPath::IndexPath(std::vector<PriceEntry> entries, double start_level)
    : entries_(std::move(entries)), start_level_(start_level) {
    if (!(start_level_ > 0.0)) throw DomainError("index path: start level must be positive");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (!(entries_[i].close > 0.0)) {
            throw DomainError("index path: non-positive close on " + format_date(entries_[i].date));
        }
        if (i > 0 && !(entries_[i - 1].date < entries_[i].date)) {
            throw DomainError("index path: dates not strictly increasing at " + format_date(entries_[i].date));
        }
    }
}

std::vector<double> cumulative_returns(const IndexPath& path) {
    std::vector<double> out;
    out.reserve(path.size());
    const double start = path.start_level();
    for (const auto& e : path.entries()) out.push_back((e.close - start) / start);
    return out;
}

ObservationView view_from_levels(std::span<const double> levels, double start_level,
                                 std::span<const std::size_t> observation_indices) {
    ObservationView view;
    view.index_return.reserve(observation_indices.size());
    view.running_min.reserve(observation_indices.size());
    double running = std::numeric_limits<double>::infinity();
    std::size_t next = 0;
    for (std::size_t obs : observation_indices) {
        for (; next <= obs; ++next) running = std::min(running, (levels[next] - start_level) / start_level);
        view.index_return.push_back((levels[obs] - start_level) / start_level);
        view.running_min.push_back(running);
    }
    return view;
}

ObservationView observe(const IndexPath& path, const NoteTerms& terms) {
    const auto& entries = path.entries();
    auto first = std::lower_bound(entries.begin(), entries.end(), terms.trade_date,
                                  [](const PriceEntry& e, const Date& d) { return e.date < d; });
    std::vector<double> levels;
    for (auto it = first; it != entries.end(); ++it) levels.push_back(it->close);

    std::vector<std::size_t> indices;
    indices.reserve(terms.observations.size());
    for (const auto& obs : terms.observations) {
        auto it = std::lower_bound(first, entries.end(), obs.date,
                                   [](const PriceEntry& e, const Date& d) { return e.date < d; });
        if (it == entries.end() || it->date != obs.date) {
            throw DomainError("price history has no close for observation date " + format_date(obs.date));
        }
        indices.push_back(static_cast<std::size_t>(it - first));
    }
    return view_from_levels(levels, path.start_level(), indices);
}

std::optional<Date> breach_date(const IndexPath& path, const NoteTerms& terms) {
    const double threshold = terms.breach_threshold();
    const double start = path.start_level();
    for (const auto& e : path.entries()) {
        if (e.date < terms.trade_date) continue;
        if (e.date > terms.final_valuation_date) break;
        if ((e.close - start) / start < threshold) return e.date;
    }
    return std::nullopt;
}

IndexPath read_prices_csv(std::istream& in, double start_level) {
    std::string line;
    std::size_t line_number = 0;
    bool header_seen = false;
    std::vector<PriceEntry> entries;
    while (std::getline(in, line)) {
        ++line_number;
        auto text = trim(line);
        if (line_number == 1 && text.substr(0, 3) == "\xEF\xBB\xBF") text = trim(text.substr(3));
        if (text.empty()) continue;
        if (!header_seen) {
            if (text != "date,close") {
                throw DomainError("prices CSV: expected header 'date,close', got '" + std::string(text) + "'");
            }
            header_seen = true;
            continue;
        }
        auto where = " (line " + std::to_string(line_number) + ")";
        auto fields = split_trimmed(text, ',');
        if (fields.size() != 2) throw DomainError("prices CSV: expected two fields" + where);
        auto date = parse_date(fields[0]);
        auto close = parse_double(fields[1]);
        if (!date) throw DomainError("prices CSV: bad date '" + std::string(fields[0]) + "'" + where);
        if (!close || !(*close > 0.0)) throw DomainError("prices CSV: bad close '" + std::string(fields[1]) + "'" + where);
        if (!entries.empty() && !(entries.back().date < *date)) {
            throw DomainError("prices CSV: rows must be sorted by strictly increasing date" + where);
        }
        entries.push_back({*date, *close});
    }
    if (in.bad()) throw IoError("prices CSV: read failure");
    if (!header_seen) throw DomainError("prices CSV: empty input");
    return IndexPath(std::move(entries), start_level);
}

IndexPath read_prices_csv_file(const std::string& file, double start_level) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open prices file '" + file + "'");
    return read_prices_csv(in, start_level);
}

} // namespace acnote
