#include "acnote/money.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

namespace acnote {

Cents Cents::from_dollars(double dollars) {
    return Cents(std::llround(dollars * 100.0));
}

std::optional<Cents> Cents::parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    auto dot = text.find('.');
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty() && frac.empty()) return std::nullopt;
    if (dot != std::string_view::npos && frac.empty()) return std::nullopt;
    if (frac.size() > 2) return std::nullopt;

    std::int64_t units = 0;
    if (!whole.empty()) {
        auto [ptr, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), units);
        if (ec != std::errc{} || ptr != whole.data() + whole.size()) return std::nullopt;
    }
    std::int64_t minor = 0;
    for (char c : frac) {
        if (c < '0' || c > '9') return std::nullopt;
        minor = minor * 10 + (c - '0');
    }
    if (frac.size() == 1) minor *= 10;
    std::int64_t total = units * 100 + minor;
    return Cents(negative ? -total : total);
}

std::string Cents::to_string() const {
    std::int64_t magnitude = std::llabs(value_);
    std::string out = value_ < 0 ? "-" : "";
    out += std::to_string(magnitude / 100);
    out += '.';
    std::int64_t minor = magnitude % 100;
    if (minor < 10) out += '0';
    out += std::to_string(minor);
    return out;
}

std::int64_t divide_round_half_away(__int128 numerator, __int128 denominator) {
    bool negative = numerator < 0;
    __int128 magnitude = negative ? -numerator : numerator;
    __int128 quotient = (2 * magnitude + denominator) / (2 * denominator);
    return static_cast<std::int64_t>(negative ? -quotient : quotient);
}

} // namespace acnote
