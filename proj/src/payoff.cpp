#include "acnote/payoff.hpp"

#include <cassert>

#include "acnote/error.hpp"

namespace acnote {

namespace {

void check_view(const NoteTerms& terms, const ObservationView& view) {
    if (view.index_return.size() != terms.observations.size() ||
        view.running_min.size() != terms.observations.size()) {
        throw DomainError("observation view has " + std::to_string(view.index_return.size()) +
                          " observations, terms have " + std::to_string(terms.observations.size()));
    }
}

PayoffOutcome settle(const NoteTerms& terms, Interpretation interpretation, Resolution resolution,
                     double net_amount, Cents net) {
    PayoffOutcome out;
    out.net_amount = net_amount;
    out.net = net;
    out.gross = terms.principal + net;
    out.resolution = resolution;
    out.resolution_date = resolution.kind == ResolutionKind::called
                              ? terms.observations[resolution.observation - 1].date
                              : terms.final_valuation_date;
    out.payment_date = terms.final_valuation_date;
    out.interpretation = interpretation;
    return out;
}

PayoffOutcome called(const NoteTerms& terms, Interpretation interpretation, std::size_t index) {
    Cents coupon = terms.observations[index].coupon_net;
    return settle(terms, interpretation, {ResolutionKind::called, index + 1}, coupon.dollars(), coupon);
}

PayoffOutcome exposed(const NoteTerms& terms, Interpretation interpretation, ResolutionKind kind,
                      const ObservationView& view) {
    double net = terms.principal.dollars() * view.final_return();
    return settle(terms, interpretation, {kind, 0}, net, Cents::from_dollars(net));
}

} // namespace

std::string to_string(Interpretation interpretation) {
    return interpretation == Interpretation::A ? "A" : "B";
}

std::string to_string(const Resolution& resolution) {
    switch (resolution.kind) {
    case ResolutionKind::called: return "called(" + std::to_string(resolution.observation) + ")";
    case ResolutionKind::break_even: return "break_even";
    case ResolutionKind::trigger_loss: return "trigger_loss";
    case ResolutionKind::post_breach_hold: return "post_breach_hold";
    }
    return "unknown";
}

double PayoffOutcome::total_return() const {
    return static_cast<double>(net.value()) / static_cast<double>(gross.value() - net.value());
}

PayoffOutcome payoff_interpretation_a(const NoteTerms& terms, const ObservationView& view) {
    check_view(terms, view);
    for (std::size_t r = 0; r < view.observation_count(); ++r) {
        if (view.index_return[r] >= 0.0) return called(terms, Interpretation::A, r);
    }
    if (view.overall_min() >= terms.breach_threshold()) {
        return settle(terms, Interpretation::A, {ResolutionKind::break_even, 0}, 0.0, Cents(0));
    }
    return exposed(terms, Interpretation::A, ResolutionKind::trigger_loss, view);
}

PayoffOutcome payoff_interpretation_b(const NoteTerms& terms, const ObservationView& view) {
    check_view(terms, view);
    const double threshold = terms.breach_threshold();
    for (std::size_t r = 0; r < view.observation_count(); ++r) {
        bool breached_before = r > 0 && view.running_min[r - 1] < threshold;
        if (!breached_before && view.index_return[r] >= 0.0) return called(terms, Interpretation::B, r);
        if (view.running_min[r] < threshold) {
            return exposed(terms, Interpretation::B, ResolutionKind::post_breach_hold, view);
        }
    }
    assert(view.overall_min() >= threshold);
    return settle(terms, Interpretation::B, {ResolutionKind::break_even, 0}, 0.0, Cents(0));
}

PayoffOutcome payoff(Interpretation interpretation, const NoteTerms& terms, const ObservationView& view) {
    return interpretation == Interpretation::A ? payoff_interpretation_a(terms, view)
                                               : payoff_interpretation_b(terms, view);
}

Cents settlement_amount(const PayoffOutcome& outcome) {
    return outcome.gross;
}

} // namespace acnote
