#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "acnote/money.hpp"
#include "acnote/terms.hpp"
#include "support.hpp"

using namespace acnote;
using acnote::testing::day;

namespace {

std::string reference_sheet() {
    std::ifstream in(ACNOTE_DATA_DIR "/reference_note.terms");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string without_line(const std::string& text, std::string_view key) {
    std::istringstream in(text);
    std::string out, line;
    while (std::getline(in, line)) {
        if (line.rfind(key, 0) == 0) continue;
        out += line + '\n';
    }
    return out;
}

bool has_diagnostic(const TermSheetParseResult& result, std::string_view path, bool error) {
    for (const auto& d : result.diagnostics) {
        if (d.field_path == path && d.is_error() == error) return true;
    }
    return false;
}

bool has_diagnostic(const std::vector<TermSheetDiagnostic>& diags, std::string_view path, bool error) {
    for (const auto& d : diags) {
        if (d.field_path == path && d.is_error() == error) return true;
    }
    return false;
}

std::vector<double> dollars(const std::vector<Cents>& amounts) {
    std::vector<double> out;
    for (auto c : amounts) out.push_back(c.dollars());
    return out;
}

} // namespace

TEST(Cents, ParseAndFormat) {
    EXPECT_EQ(Cents::parse("10.00")->value(), 1000);
    EXPECT_EQ(Cents::parse("0.5")->value(), 50);
    EXPECT_EQ(Cents::parse("-4.87")->value(), -487);
    EXPECT_EQ(Cents::parse("3")->value(), 300);
    EXPECT_FALSE(Cents::parse("1.234"));
    EXPECT_FALSE(Cents::parse("abc"));
    EXPECT_FALSE(Cents::parse(""));
    EXPECT_EQ(Cents(-487).to_string(), "-4.87");
    EXPECT_EQ(Cents(5).to_string(), "0.05");
    EXPECT_EQ(Cents(-5).to_string(), "-0.05");
}

TEST(Cents, RoundsHalfAwayFromZero) {
    EXPECT_EQ(Cents::from_dollars(2.605).value(), 261);
    EXPECT_EQ(Cents::from_dollars(-2.605).value(), -261);
    EXPECT_EQ(Cents::from_dollars(-4.8742).value(), -487);
    EXPECT_EQ(divide_round_half_away(5, 2), 3);
    EXPECT_EQ(divide_round_half_away(-5, 2), -3);
    EXPECT_EQ(divide_round_half_away(4, 3), 1);
}

TEST(ParseTermSheet, ReferenceSheetIsValid) {
    auto result = parse_term_sheet(reference_sheet());
    ASSERT_TRUE(result.ok());
    EXPECT_TRUE(result.diagnostics.empty());
    const auto& t = *result.terms;
    EXPECT_EQ(t, reference_note_terms());
    EXPECT_DOUBLE_EQ(t.index_starting_level, 369.44);
    EXPECT_NEAR(t.trigger_level(), 184.72, 1e-9);
    ASSERT_EQ(t.observations.size(), 6u);
    EXPECT_EQ(t.observations.front().date, day(2008, 5, 5));
    EXPECT_EQ(t.observations.back().date, day(2009, 8, 5));
    EXPECT_EQ(dollars({t.observations[0].coupon_net, t.observations[1].coupon_net, t.observations[2].coupon_net,
                       t.observations[3].coupon_net, t.observations[4].coupon_net, t.observations[5].coupon_net}),
              (std::vector<double>{0.52, 1.04, 1.56, 2.08, 2.61, 3.13}));
}

TEST(ParseTermSheet, OutOfOrderObservationsFlagged) {
    auto text = reference_sheet();
    auto a = text.find("observation = 2008-08-05");
    auto b = text.find("observation = 2008-11-05");
    ASSERT_NE(a, std::string::npos);
    text.replace(a, 24, "observation = 2008-11-05");
    text.replace(b, 24, "observation = 2008-08-05");
    auto result = parse_term_sheet(text);
    EXPECT_FALSE(result.ok());
    EXPECT_TRUE(has_diagnostic(result, "observations", true));
}

TEST(ParseTermSheet, MissingPrincipalFlagged) {
    auto result = parse_term_sheet(without_line(reference_sheet(), "principal"));
    EXPECT_FALSE(result.ok());
    EXPECT_TRUE(has_diagnostic(result, "principal", true));
}

TEST(ParseTermSheet, EveryFailureCarriesAFieldPath) {
    const std::vector<std::string> broken{
        "",
        "principal = ten\n",
        without_line(reference_sheet(), "trade_date"),
        without_line(reference_sheet(), "maturity_date"),
        without_line(reference_sheet(), "observation"),
        reference_sheet() + "observation = 2009-09-05\n",
        reference_sheet() + "garbage line\n",
        reference_sheet() + "trigger_fraction = 0.6\n",
    };
    for (const auto& text : broken) {
        auto result = parse_term_sheet(text);
        EXPECT_FALSE(result.ok()) << text;
        ASSERT_FALSE(result.diagnostics.empty());
        for (const auto& d : result.diagnostics) EXPECT_FALSE(d.field_path.empty());
    }
}

TEST(ParseTermSheet, UnknownKeyIsWarning) {
    auto result = parse_term_sheet(reference_sheet() + "issuer = someone\n");
    EXPECT_TRUE(result.ok());
    EXPECT_TRUE(has_diagnostic(result, "issuer", false));
}

TEST(ParseTermSheet, RoundTripReference) {
    auto terms = reference_note_terms();
    auto again = parse_term_sheet(serialize_term_sheet(terms));
    ASSERT_TRUE(again.ok());
    EXPECT_EQ(*again.terms, terms);
}

TEST(ParseTermSheet, RoundTripRandomValidSheets) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> gap(1, 120);
    std::uniform_int_distribution<int> step(1, 500);
    std::uniform_int_distribution<int> count(1, 8);
    std::uniform_real_distribution<double> unit(0.01, 0.99);
    for (int trial = 0; trial < 300; ++trial) {
        NoteTerms t;
        t.principal = Cents(100 + step(rng) * 10);
        t.index_starting_level = std::round(unit(rng) * 500000.0) / 100.0 + 1.0;
        t.trigger_fraction = std::round(unit(rng) * 100.0) / 100.0;
        t.trade_date = acnote::testing::add_days(day(2000, 1, 1), gap(rng) * 10);
        if (trial % 2) t.settlement_date = acnote::testing::add_days(t.trade_date, 3);
        Date d = t.trade_date;
        std::int64_t coupon = 0;
        int n = count(rng);
        for (int i = 0; i < n; ++i) {
            d = acnote::testing::add_days(d, gap(rng));
            coupon += step(rng);
            t.observations.push_back({d, Cents(coupon)});
        }
        t.final_valuation_date = d;
        t.maturity_date = acnote::testing::add_days(d, gap(rng) % 10);
        if (trial % 3 == 0) t.per_annum_call_rate = unit(rng);
        for (const auto& d : validate(t)) ASSERT_FALSE(d.is_error()) << to_string(d);
        auto first = parse_term_sheet(serialize_term_sheet(t));
        ASSERT_TRUE(first.ok()) << serialize_term_sheet(t);
        EXPECT_EQ(*first.terms, t);
        auto second = parse_term_sheet(serialize_term_sheet(*first.terms));
        ASSERT_TRUE(second.ok());
        EXPECT_EQ(*second.terms, *first.terms);
    }
}

TEST(CouponSchedule, ReferenceRate) {
    EXPECT_EQ(dollars(derive_coupon_schedule(0.2084, Cents(1000), 6)),
              (std::vector<double>{0.52, 1.04, 1.56, 2.08, 2.61, 3.13}));
    EXPECT_EQ(dollars(derive_coupon_schedule(0.2084, Cents(1000), 1)), (std::vector<double>{0.52}));
    EXPECT_EQ(dollars(derive_coupon_schedule(0.40, Cents(1000), 2)), (std::vector<double>{1.00, 2.00}));
}

TEST(CouponSchedule, StrictlyIncreasingForPositiveRates) {
    for (double rate : {0.01, 0.05, 0.2084, 0.5, 1.3}) {
        auto s = derive_coupon_schedule(rate, Cents(1000), 12);
        for (std::size_t i = 1; i < s.size(); ++i) EXPECT_LT(s[i - 1], s[i]) << rate;
    }
}

TEST(Validate, Reference) {
    EXPECT_TRUE(validate(reference_note_terms()).empty());
}

TEST(Validate, TriggerFractionOutOfRange) {
    auto t = reference_note_terms();
    t.trigger_fraction = 1.2;
    EXPECT_TRUE(has_diagnostic(validate(t), "trigger_fraction", true));
}

TEST(Validate, RateCouponMismatchIsWarningOnly) {
    auto t = reference_note_terms();
    t.per_annum_call_rate = 0.30;
    auto diags = validate(t);
    ASSERT_FALSE(diags.empty());
    // 0.30 gives 0.75, 1.50, ... so every stored coupon disagrees.
    auto expected = derive_coupon_schedule(0.30, t.principal, 6);
    for (std::size_t i = 0; i < 6; ++i) {
        bool differs = expected[i] != t.observations[i].coupon_net;
        EXPECT_EQ(has_diagnostic(diags, "observations[" + std::to_string(i) + "].coupon_net", false), differs);
    }
    for (const auto& d : diags) EXPECT_FALSE(d.is_error());
}

TEST(Validate, InvariantViolations) {
    auto t = reference_note_terms();
    t.maturity_date = day(2009, 8, 1);
    EXPECT_TRUE(has_diagnostic(validate(t), "maturity_date", true));

    t = reference_note_terms();
    t.observations[2].coupon_net = Cents(100);
    EXPECT_TRUE(has_diagnostic(validate(t), "observations[2].coupon_net", true));

    t = reference_note_terms();
    t.final_valuation_date = day(2009, 8, 6);
    EXPECT_TRUE(has_diagnostic(validate(t), "final_valuation_date", true));

    t = reference_note_terms();
    t.principal = Cents(0);
    EXPECT_TRUE(has_diagnostic(validate(t), "principal", true));

    t = reference_note_terms();
    t.trade_date = day(2008, 5, 5);
    EXPECT_TRUE(has_diagnostic(validate(t), "observations", true));
}
