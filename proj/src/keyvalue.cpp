#include "acnote/keyvalue.hpp"

#include <charconv>
#include <cmath>

namespace acnote {

const KeyValueLine* KeyValueDocument::find(std::string_view key) const {
    for (const auto& e : entries) {
        if (e.key == key) return &e;
    }
    return nullptr;
}

std::vector<const KeyValueLine*> KeyValueDocument::find_all(std::string_view key) const {
    std::vector<const KeyValueLine*> out;
    for (const auto& e : entries) {
        if (e.key == key) out.push_back(&e);
    }
    return out;
}

std::string_view trim(std::string_view text) {
    const auto ws = " \t\r\n\v\f";
    auto first = text.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    auto last = text.find_last_not_of(ws);
    return text.substr(first, last - first + 1);
}

std::vector<std::string_view> split_trimmed(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        auto pos = text.find(sep, start);
        parts.push_back(trim(text.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

KeyValueDocument parse_key_values(std::string_view text) {
    KeyValueDocument doc;
    std::size_t line_number = 0;
    std::size_t start = 0;
    // Strip a UTF-8 byte order mark.
    if (text.substr(0, 3) == "\xEF\xBB\xBF") start = 3;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        std::string_view line = text.substr(start, end == std::string_view::npos ? end : end - start);
        ++line_number;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (!line.empty()) {
            auto eq = line.find('=');
            auto key = eq == std::string_view::npos ? std::string_view{} : trim(line.substr(0, eq));
            if (key.empty()) {
                doc.malformed.push_back(line_number);
            } else {
                doc.entries.push_back({line_number, std::string(key), std::string(trim(line.substr(eq + 1)))});
            }
        }
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return doc;
}

std::optional<double> parse_double(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

} // namespace acnote
