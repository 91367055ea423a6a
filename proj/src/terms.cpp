#include "acnote/terms.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "acnote/keyvalue.hpp"

namespace acnote {

namespace {

using Severity = TermSheetDiagnostic::Severity;

constexpr std::string_view kKnownKeys[] = {
    "principal",       "index_starting_level", "trigger_fraction", "trade_date",
    "settlement_date", "final_valuation_date", "maturity_date",    "per_annum_call_rate",
    "observation",
};

bool is_known_key(std::string_view key) {
    for (auto k : kKnownKeys) {
        if (k == key) return true;
    }
    return false;
}

std::string at_line(const KeyValueLine& line) {
    return " (line " + std::to_string(line.line_number) + ")";
}

class SheetReader {
public:
    explicit SheetReader(const KeyValueDocument& doc) : doc_(doc) {}

    const KeyValueLine* single(std::string_view key, bool required) {
        auto all = doc_.find_all(key);
        if (all.empty()) {
            if (required) error(std::string(key), "missing required key");
            return nullptr;
        }
        if (all.size() > 1) {
            error(std::string(key), "key given more than once" + at_line(*all[1]));
            return nullptr;
        }
        return all.front();
    }

    std::optional<double> number(std::string_view key, bool required) {
        auto* line = single(key, required);
        if (!line) return std::nullopt;
        auto value = parse_double(line->value);
        if (!value) error(std::string(key), "not a number: '" + line->value + "'" + at_line(*line));
        return value;
    }

    std::optional<Date> date(std::string_view key, bool required) {
        auto* line = single(key, required);
        if (!line) return std::nullopt;
        auto value = parse_date(line->value);
        if (!value) error(std::string(key), "not a YYYY-MM-DD date: '" + line->value + "'" + at_line(*line));
        return value;
    }

    std::optional<Cents> money(std::string_view key, bool required) {
        auto* line = single(key, required);
        if (!line) return std::nullopt;
        auto value = Cents::parse(line->value);
        if (!value) error(std::string(key), "not a currency amount: '" + line->value + "'" + at_line(*line));
        return value;
    }

    void error(std::string path, std::string message) {
        diagnostics.push_back({Severity::error, std::move(path), std::move(message)});
    }

    std::vector<TermSheetDiagnostic> diagnostics;

private:
    const KeyValueDocument& doc_;
};

} // namespace

std::vector<double> NoteTerms::coupon_dollars() const {
    std::vector<double> out;
    out.reserve(observations.size());
    for (const auto& obs : observations) out.push_back(obs.coupon_net.dollars());
    return out;
}

std::string to_string(const TermSheetDiagnostic& diagnostic) {
    return std::string(diagnostic.is_error() ? "error" : "warning") + ": " + diagnostic.field_path + ": " +
           diagnostic.message;
}

TermSheetParseResult parse_term_sheet(std::string_view text) {
    auto doc = parse_key_values(text);
    SheetReader reader(doc);
    TermSheetParseResult result;

    for (auto line : doc.malformed) {
        reader.error("line " + std::to_string(line), "expected 'key = value'");
    }
    std::set<std::string> reported;
    for (const auto& e : doc.entries) {
        if (!is_known_key(e.key) && reported.insert(e.key).second) {
            reader.diagnostics.push_back({Severity::warning, e.key, "unknown key ignored" + at_line(e)});
        }
    }

    auto principal = reader.money("principal", true);
    auto start = reader.number("index_starting_level", true);
    auto trigger = reader.number("trigger_fraction", true);
    auto trade = reader.date("trade_date", true);
    auto settlement = reader.date("settlement_date", false);
    auto final_valuation = reader.date("final_valuation_date", true);
    auto maturity = reader.date("maturity_date", true);
    auto rate = reader.number("per_annum_call_rate", false);
    bool settlement_given = doc.find("settlement_date") != nullptr;
    bool rate_given = doc.find("per_annum_call_rate") != nullptr;

    std::vector<Observation> observations;
    bool observations_ok = true;
    auto obs_lines = doc.find_all("observation");
    if (obs_lines.empty()) {
        reader.error("observations", "at least one 'observation = <date>, <coupon_net>' line is required");
        observations_ok = false;
    }
    for (std::size_t i = 0; i < obs_lines.size(); ++i) {
        const auto& line = *obs_lines[i];
        auto path = "observations[" + std::to_string(i) + "]";
        auto parts = split_trimmed(line.value, ',');
        if (parts.size() != 2) {
            reader.error(path, "expected '<date>, <coupon_net>', one coupon per observation date" + at_line(line));
            observations_ok = false;
            continue;
        }
        auto date = parse_date(parts[0]);
        auto coupon = Cents::parse(parts[1]);
        if (!date) reader.error(path + ".date", "not a YYYY-MM-DD date: '" + std::string(parts[0]) + "'" + at_line(line));
        if (!coupon) reader.error(path + ".coupon_net", "not a currency amount: '" + std::string(parts[1]) + "'" + at_line(line));
        if (!date || !coupon) {
            observations_ok = false;
            continue;
        }
        observations.push_back({*date, *coupon});
    }

    bool scalars_ok = principal && start && trigger && trade && final_valuation && maturity &&
                      (!settlement_given || settlement) && (!rate_given || rate);
    if (scalars_ok && observations_ok) {
        NoteTerms terms;
        terms.principal = *principal;
        terms.index_starting_level = *start;
        terms.trigger_fraction = *trigger;
        terms.trade_date = *trade;
        terms.settlement_date = settlement;
        terms.final_valuation_date = *final_valuation;
        terms.maturity_date = *maturity;
        terms.observations = std::move(observations);
        terms.per_annum_call_rate = rate;
        auto checks = validate(terms);
        reader.diagnostics.insert(reader.diagnostics.end(), checks.begin(), checks.end());
        bool any_error = false;
        for (const auto& d : reader.diagnostics) any_error = any_error || d.is_error();
        if (!any_error) result.terms = std::move(terms);
    }
    result.diagnostics = std::move(reader.diagnostics);
    return result;
}

std::string serialize_term_sheet(const NoteTerms& terms) {
    std::ostringstream out;
    out << "principal = " << terms.principal.to_string() << '\n';
    out << "index_starting_level = " << format_double(terms.index_starting_level) << '\n';
    out << "trigger_fraction = " << format_double(terms.trigger_fraction) << '\n';
    out << "trade_date = " << format_date(terms.trade_date) << '\n';
    if (terms.settlement_date) out << "settlement_date = " << format_date(*terms.settlement_date) << '\n';
    out << "final_valuation_date = " << format_date(terms.final_valuation_date) << '\n';
    out << "maturity_date = " << format_date(terms.maturity_date) << '\n';
    if (terms.per_annum_call_rate) out << "per_annum_call_rate = " << format_double(*terms.per_annum_call_rate) << '\n';
    for (const auto& obs : terms.observations) {
        out << "observation = " << format_date(obs.date) << ", " << obs.coupon_net.to_string() << '\n';
    }
    return out.str();
}

std::vector<Cents> derive_coupon_schedule(double per_annum_rate, Cents principal, std::size_t quarters) {
    constexpr std::int64_t kRateScale = 100'000'000;
    const __int128 rate_units = std::llround(per_annum_rate * static_cast<double>(kRateScale));
    std::vector<Cents> schedule;
    schedule.reserve(quarters);
    for (std::size_t r = 1; r <= quarters; ++r) {
        __int128 numerator = static_cast<__int128>(principal.value()) * rate_units * static_cast<__int128>(r);
        schedule.emplace_back(divide_round_half_away(numerator, static_cast<__int128>(4) * kRateScale));
    }
    return schedule;
}

std::vector<TermSheetDiagnostic> validate(const NoteTerms& terms) {
    std::vector<TermSheetDiagnostic> out;
    auto error = [&](std::string path, std::string message) {
        out.push_back({Severity::error, std::move(path), std::move(message)});
    };

    if (terms.principal.value() <= 0) error("principal", "must be positive");
    if (!(terms.index_starting_level > 0.0) || !std::isfinite(terms.index_starting_level)) {
        error("index_starting_level", "must be positive");
    }
    if (!(terms.trigger_fraction > 0.0 && terms.trigger_fraction < 1.0)) {
        error("trigger_fraction", "must lie strictly between 0 and 1, got " + format_double(terms.trigger_fraction));
    }
    if (terms.settlement_date && *terms.settlement_date < terms.trade_date) {
        error("settlement_date", "precedes trade_date");
    }
    if (terms.final_valuation_date > terms.maturity_date) {
        error("maturity_date", "precedes final_valuation_date");
    }

    const auto& obs = terms.observations;
    if (obs.empty()) {
        error("observations", "at least one observation is required");
        return out;
    }
    if (!(terms.trade_date < obs.front().date)) {
        error("observations", "first observation " + format_date(obs.front().date) + " is not after trade_date");
    }
    for (std::size_t i = 1; i < obs.size(); ++i) {
        if (!(obs[i - 1].date < obs[i].date)) {
            error("observations", "observation dates must be strictly increasing: " + format_date(obs[i - 1].date) +
                                      " then " + format_date(obs[i].date));
            break;
        }
    }
    if (obs.back().date != terms.final_valuation_date) {
        error("final_valuation_date", "must equal the last observation date " + format_date(obs.back().date));
    }
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (obs[i].coupon_net.value() <= 0) {
            error("observations[" + std::to_string(i) + "].coupon_net", "must be positive");
        }
        if (i > 0 && !(obs[i - 1].coupon_net < obs[i].coupon_net)) {
            error("observations[" + std::to_string(i) + "].coupon_net", "coupons must be strictly increasing");
        }
    }

    if (terms.per_annum_call_rate) {
        double rate = *terms.per_annum_call_rate;
        if (!(rate > 0.0)) {
            error("per_annum_call_rate", "must be positive");
        } else {
            auto derived = derive_coupon_schedule(rate, terms.principal, obs.size());
            for (std::size_t i = 0; i < obs.size(); ++i) {
                if (derived[i] != obs[i].coupon_net) {
                    out.push_back({Severity::warning, "observations[" + std::to_string(i) + "].coupon_net",
                                   "stored coupon " + obs[i].coupon_net.to_string() + " differs from " +
                                       derived[i].to_string() + " derived from per_annum_call_rate " +
                                       format_double(rate)});
                }
            }
        }
    }
    return out;
}

NoteTerms reference_note_terms() {
    using namespace std::chrono;
    NoteTerms terms;
    terms.principal = Cents(1000);
    terms.index_starting_level = 369.44;
    terms.trigger_fraction = 0.5;
    terms.trade_date = 2008y / February / 5d;
    terms.settlement_date = 2008y / February / 8d;
    terms.final_valuation_date = 2009y / August / 5d;
    terms.maturity_date = 2009y / August / 10d;
    terms.per_annum_call_rate = 0.2084;
    terms.observations = {
        {2008y / May / 5d, Cents(52)},      {2008y / August / 5d, Cents(104)},
        {2008y / November / 5d, Cents(156)}, {2009y / February / 5d, Cents(208)},
        {2009y / May / 5d, Cents(261)},      {2009y / August / 5d, Cents(313)},
    };
    return terms;
}

} // namespace acnote
