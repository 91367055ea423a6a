#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace acnote {

/// Currency amount held as an exact count of cents.
class Cents {
public:
    constexpr Cents() = default;
    constexpr explicit Cents(std::int64_t minor_units) : value_(minor_units) {}

    /// Rounds a dollar amount to the nearest cent, halves away from zero.
    static Cents from_dollars(double dollars);

    /// Parses "12", "-4.87", "0.5". More than two decimals is rejected.
    static std::optional<Cents> parse(std::string_view text);

    constexpr std::int64_t value() const { return value_; }
    constexpr double dollars() const { return static_cast<double>(value_) / 100.0; }

    /// "-4.87", "10.00"
    std::string to_string() const;

    constexpr Cents operator+(Cents other) const { return Cents(value_ + other.value_); }
    constexpr Cents operator-(Cents other) const { return Cents(value_ - other.value_); }
    constexpr Cents operator-() const { return Cents(-value_); }
    constexpr auto operator<=>(const Cents&) const = default;

private:
    std::int64_t value_ = 0;
};

/// Integer division rounding halves away from zero. `denominator` > 0.
std::int64_t divide_round_half_away(__int128 numerator, __int128 denominator);

} // namespace acnote
