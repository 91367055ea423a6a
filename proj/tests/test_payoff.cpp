#include <gtest/gtest.h>

#include <random>

#include "acnote/path.hpp"
#include "acnote/payoff.hpp"
#include "support.hpp"

using namespace acnote;

namespace {

ObservationView make_view(std::vector<double> returns, std::vector<double> mins) {
    return ObservationView{std::move(returns), std::move(mins)};
}

/// Running minima equal to the returns themselves, capped by `extra_low`
/// from observation `at` onwards.
ObservationView view_with_low(std::vector<double> returns, double extra_low, std::size_t at) {
    std::vector<double> mins;
    double low = 1e9;
    for (std::size_t r = 0; r < returns.size(); ++r) {
        low = std::min(low, returns[r]);
        if (r == at) low = std::min(low, extra_low);
        mins.push_back(low);
    }
    return make_view(std::move(returns), std::move(mins));
}

ObservationView table_view() {
    std::vector<double> returns;
    for (double c : acnote::testing::table_closes()) returns.push_back((c - 369.44) / 369.44);
    return view_with_low(returns, -1.0 + 1e-9, 99);
}

acnote::testing::CaseOracle reference_oracle() {
    return {{0.52, 1.04, 1.56, 2.08, 2.61, 3.13}, 10.0, -0.5};
}

} // namespace

TEST(PayoffA, TableOutcome) {
    auto out = payoff_interpretation_a(reference_note_terms(), table_view());
    EXPECT_EQ(out.resolution.kind, ResolutionKind::trigger_loss);
    EXPECT_EQ(out.gross.to_string(), "5.13");
    EXPECT_EQ(out.net.to_string(), "-4.87");
    EXPECT_NEAR(out.total_return(), -0.487, 0.0005);
    EXPECT_EQ(out.payment_date, reference_note_terms().final_valuation_date);
}

TEST(PayoffA, CalledAtFirstObservation) {
    auto out = payoff_interpretation_a(reference_note_terms(),
                                       view_with_low({0.001, -0.2, -0.3, -0.1, -0.2, -0.3}, 0.0, 0));
    EXPECT_EQ(out.resolution, (Resolution{ResolutionKind::called, 1}));
    EXPECT_EQ(out.net.to_string(), "0.52");
    EXPECT_EQ(out.resolution_date, reference_note_terms().observations[0].date);
    EXPECT_EQ(out.payment_date, reference_note_terms().final_valuation_date);
}

TEST(PayoffA, BreakEven) {
    auto out = payoff_interpretation_a(reference_note_terms(),
                                       view_with_low({-0.1, -0.2, -0.3, -0.1, -0.2, -0.3}, -0.49, 3));
    EXPECT_EQ(out.resolution.kind, ResolutionKind::break_even);
    EXPECT_EQ(out.gross.to_string(), "10.00");
    EXPECT_EQ(out.net.value(), 0);
}

TEST(PayoffA, ZeroReturnCallsAndTriggerBoundaryIsBenign) {
    auto called = payoff_interpretation_a(reference_note_terms(),
                                          view_with_low({-0.1, 0.0, -0.3, -0.1, -0.2, -0.3}, -0.6, 0));
    EXPECT_EQ(called.resolution, (Resolution{ResolutionKind::called, 2}));
    auto even = payoff_interpretation_a(reference_note_terms(),
                                        view_with_low({-0.1, -0.2, -0.3, -0.1, -0.2, -0.3}, -0.5, 2));
    EXPECT_EQ(even.resolution.kind, ResolutionKind::break_even);
}

TEST(PayoffB, TableOutcome) {
    auto out = payoff_interpretation_b(reference_note_terms(), table_view());
    EXPECT_EQ(out.resolution.kind, ResolutionKind::post_breach_hold);
    EXPECT_EQ(out.gross.to_string(), "5.13");
}

TEST(PayoffB, BreachThenRecovery) {
    auto view = view_with_low({-0.2, 0.05, 0.1, -0.1, -0.2, -0.30}, -0.6, 0);
    auto b = payoff_interpretation_b(reference_note_terms(), view);
    EXPECT_EQ(b.resolution.kind, ResolutionKind::post_breach_hold);
    EXPECT_EQ(b.net.to_string(), "-3.00");
    auto a = payoff_interpretation_a(reference_note_terms(), view);
    EXPECT_EQ(a.resolution, (Resolution{ResolutionKind::called, 2}));
    EXPECT_EQ(a.net.to_string(), "1.04");
}

TEST(PayoffB, BreachFreeMatchesA) {
    auto view = view_with_low({-0.2, -0.1, 0.02, 0.1, -0.2, -0.30}, -0.4, 1);
    auto a = payoff_interpretation_a(reference_note_terms(), view);
    auto b = payoff_interpretation_b(reference_note_terms(), view);
    EXPECT_EQ(b.resolution, (Resolution{ResolutionKind::called, 3}));
    EXPECT_EQ(b.net.to_string(), "1.56");
    EXPECT_EQ(a.resolution, b.resolution);
    EXPECT_EQ(a.net, b.net);
}

TEST(PayoffB, BreachInsideCallQuarterStillCalls) {
    // Breach between observations 1 and 2, with I_2 >= 0: no breach up to observation 1.
    auto view = view_with_low({-0.2, 0.01, -0.1, -0.1, -0.2, -0.3}, -0.6, 1);
    auto b = payoff_interpretation_b(reference_note_terms(), view);
    EXPECT_EQ(b.resolution, (Resolution{ResolutionKind::called, 2}));
}

TEST(Settlement, Examples) {
    auto terms = reference_note_terms();
    auto loss = payoff_interpretation_a(terms, view_with_low({-0.1, -0.2, -0.3, -0.4, -0.45, -0.487}, -0.6, 2));
    EXPECT_EQ(loss.net.to_string(), "-4.87");
    EXPECT_EQ(settlement_amount(loss).to_string(), "5.13");

    auto even = payoff_interpretation_a(terms, view_with_low({-0.1, -0.2, -0.3, -0.4, -0.45, -0.3}, -0.45, 2));
    EXPECT_EQ(settlement_amount(even).to_string(), "10.00");

    auto top = payoff_interpretation_a(terms, view_with_low({-0.1, -0.2, -0.3, -0.4, -0.45, 0.3}, -0.45, 2));
    EXPECT_EQ(settlement_amount(top).to_string(), "13.13");
    EXPECT_NEAR(top.total_return(), 0.313, 1e-9);
}

TEST(PayoffProperties, RandomViewsAgainstCaseOracle) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ret(-0.95, 0.4);
    std::uniform_real_distribution<double> dip(0.0, 0.5);
    auto terms = reference_note_terms();
    auto oracle = reference_oracle();
    for (int trial = 0; trial < 20000; ++trial) {
        std::vector<double> returns(6), mins(6);
        double low = 1e9;
        for (std::size_t r = 0; r < 6; ++r) {
            returns[r] = ret(rng);
            low = std::min({low, returns[r], returns[r] - dip(rng) * (trial % 3 == 0)});
            low = std::max(low, -0.99);
            mins[r] = std::min(low, returns[r]);
            low = mins[r];
        }
        auto view = make_view(returns, mins);
        auto a = payoff_interpretation_a(terms, view);
        auto b = payoff_interpretation_b(terms, view);
        EXPECT_NEAR(a.net_amount, oracle.net_a(returns, mins.back()), 1e-12);
        EXPECT_NEAR(b.net_amount, oracle.net_b(returns, mins), 1e-12);
        EXPECT_EQ(a.gross, terms.principal + a.net);
        EXPECT_EQ(b.gross, terms.principal + b.net);
        if (b.is_called()) EXPECT_EQ(a.resolution, b.resolution);
        if (mins.back() >= -0.5) {
            EXPECT_EQ(a.resolution, b.resolution);
            EXPECT_EQ(a.net_amount, b.net_amount);
        }
        if (returns.back() < 0.0) EXPECT_LE(b.net_amount, a.net_amount);
    }
}
