#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "acnote/date.hpp"
#include "acnote/money.hpp"

namespace acnote {

/// One scheduled call observation and the net coupon paid if the note is
/// called on that date.
struct Observation {
    Date date;
    Cents coupon_net;

    bool operator==(const Observation&) const = default;
};

/// Contractual parameters of an autocallable reverse convertible note.
struct NoteTerms {
    Cents principal;
    double index_starting_level = 0.0;
    double trigger_fraction = 0.0;
    Date trade_date;
    std::optional<Date> settlement_date;
    Date final_valuation_date;
    Date maturity_date;
    std::vector<Observation> observations;
    std::optional<double> per_annum_call_rate;

    /// Index level below which the contingent protection is lost.
    double trigger_level() const { return trigger_fraction * index_starting_level; }

    /// Cumulative return below which a close counts as a trigger breach.
    double breach_threshold() const { return trigger_fraction - 1.0; }

    std::vector<double> coupon_dollars() const;

    bool operator==(const NoteTerms&) const = default;
};

struct TermSheetDiagnostic {
    enum class Severity { error, warning };

    Severity severity = Severity::error;
    std::string field_path;
    std::string message;

    bool is_error() const { return severity == Severity::error; }
};

std::string to_string(const TermSheetDiagnostic& diagnostic);

/// `terms` is set iff `diagnostics` holds no errors; warnings may accompany it.
struct TermSheetParseResult {
    std::optional<NoteTerms> terms;
    std::vector<TermSheetDiagnostic> diagnostics;

    bool ok() const { return terms.has_value(); }
};

/// Parses the line-oriented `key = value` term-sheet format:
///
///     principal            = 10.00
///     index_starting_level = 369.44
///     trigger_fraction     = 0.5
///     trade_date           = 2008-02-05
///     settlement_date      = 2008-02-08      # optional
///     final_valuation_date = 2009-08-05
///     maturity_date        = 2009-08-10
///     per_annum_call_rate  = 0.2084          # optional
///     observation          = 2008-05-05, 0.52
///
/// `observation` repeats once per call date, in date order. The parsed terms
/// are run through validate() and its diagnostics are included.
TermSheetParseResult parse_term_sheet(std::string_view text);

/// Writes `terms` in the format parse_term_sheet() reads.
std::string serialize_term_sheet(const NoteTerms& terms);

/// Net coupon for a call at each of `quarters` quarterly observations:
/// principal * rate * r / 4 for r = 1..quarters, rounded to cents with
/// halves away from zero. The rate is resolved to 1e-8 before the exact
/// integer computation.
std::vector<Cents> derive_coupon_schedule(double per_annum_rate, Cents principal, std::size_t quarters);

/// Empty iff every NoteTerms invariant holds. A call rate whose derived
/// schedule differs from the stored coupons yields a warning only: the stored
/// coupons are authoritative.
std::vector<TermSheetDiagnostic> validate(const NoteTerms& terms);

/// The note the toolkit was built around: S&P 500 Financials, Feb 2008 trade,
/// six quarterly observations, 20.84% per annum call rate.
NoteTerms reference_note_terms();

} // namespace acnote
