#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace acnote {

/// One `key = value` line of a term sheet or model spec.
struct KeyValueLine {
    std::size_t line_number = 0;
    std::string key;
    std::string value;
};

/// Result of splitting a line-oriented `key = value` document. Lines that
/// are neither blank, comments, nor key/value pairs are listed in `malformed`.
struct KeyValueDocument {
    std::vector<KeyValueLine> entries;
    std::vector<std::size_t> malformed;

    /// First entry with `key`, if any.
    const KeyValueLine* find(std::string_view key) const;
    std::vector<const KeyValueLine*> find_all(std::string_view key) const;
};

/// `#` starts a comment that runs to end of line. Keys and values are trimmed.
KeyValueDocument parse_key_values(std::string_view text);

std::string_view trim(std::string_view text);

/// Splits on `sep` and trims each piece.
std::vector<std::string_view> split_trimmed(std::string_view text, char sep);

/// Whole-string parse of a finite double.
std::optional<double> parse_double(std::string_view text);

/// Shortest text that parses back to the same double.
std::string format_double(double value);

} // namespace acnote
