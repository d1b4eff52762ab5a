#include "csv.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace domepilot::detail {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

namespace {

// Longest numeric prefix; returns the parsed value and the rest of the cell.
std::optional<std::pair<double, std::string_view>> leading_number(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double value = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || !std::isfinite(value)) return std::nullopt;
    return std::pair{value, std::string_view(ptr, static_cast<std::size_t>(last - ptr))};
}

} // namespace

std::optional<double> parse_number(std::string_view cell) {
    auto r = leading_number(cell);
    if (!r || !trim(r->second).empty()) return std::nullopt;
    return r->first;
}

std::optional<double> parse_measure(std::string_view cell) {
    auto r = leading_number(cell);
    if (!r) return std::nullopt;
    auto rest = trim(r->second);
    // A unit must start with a letter, '%', '/' or a non-ASCII byte (the degree sign).
    if (!rest.empty()) {
        const auto c = static_cast<unsigned char>(rest.front());
        if (!(std::isalpha(c) || c == '%' || c == '/' || c >= 0x80)) return std::nullopt;
    }
    return r->first;
}

std::string quote_csv(std::string_view field) {
    const bool needs = field.find_first_of(",\"\n") != std::string_view::npos ||
                       (!field.empty() && (std::isspace(static_cast<unsigned char>(field.front())) ||
                                           std::isspace(static_cast<unsigned char>(field.back()))));
    if (!needs) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

} // namespace domepilot::detail
