#pragma once

#include <string>

#include "acnote/date.hpp"
#include "acnote/money.hpp"
#include "acnote/path.hpp"
#include "acnote/terms.hpp"

namespace acnote {

/// The two readings of the note's payment procedure.
///
/// A: a trigger breach only matters at the final valuation date; a later
///    nonnegative observation still calls the note.
/// B: once the trigger is breached no call can happen; the holder receives
///    principal * (1 + final index return).
enum class Interpretation { A, B };

std::string to_string(Interpretation interpretation);

enum class ResolutionKind { called, break_even, trigger_loss, post_breach_hold };

struct Resolution {
    ResolutionKind kind = ResolutionKind::break_even;
    /// 1-based call observation; 0 unless kind == called.
    std::size_t observation = 0;

    bool operator==(const Resolution&) const = default;
};

/// "called(3)", "break_even", "trigger_loss", "post_breach_hold"
std::string to_string(const Resolution& resolution);

struct PayoffOutcome {
    /// Unrounded net payment in dollars; what expectations are taken over.
    double net_amount = 0.0;
    Cents net;
    Cents gross;
    Resolution resolution;
    /// Call observation date for called notes, otherwise the final valuation date.
    Date resolution_date;
    /// Every outcome is paid on the final valuation date.
    Date payment_date;
    Interpretation interpretation = Interpretation::A;

    bool is_called() const { return resolution.kind == ResolutionKind::called; }
    double total_return() const;
};

PayoffOutcome payoff_interpretation_a(const NoteTerms& terms, const ObservationView& view);
PayoffOutcome payoff_interpretation_b(const NoteTerms& terms, const ObservationView& view);
PayoffOutcome payoff(Interpretation interpretation, const NoteTerms& terms, const ObservationView& view);

/// Gross settlement per note.
Cents settlement_amount(const PayoffOutcome& outcome);

} // namespace acnote
