#pragma once

// Small CSV helpers shared by the readers. Internal to the library.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace domepilot::detail {

std::string_view trim(std::string_view s);

// RFC 4180 style split of one record: quoted fields may contain commas and
// doubled quotes. Embedded newlines are not supported.
std::vector<std::string> split_csv_line(std::string_view line);

// Parses a number, optionally followed by a unit suffix ("9 km/h", "1020 mbar",
// "21 °C"). Returns nullopt for anything that does not start with a number.
std::optional<double> parse_measure(std::string_view cell);

// Strict numeric parse: the whole trimmed cell must be a number.
std::optional<double> parse_number(std::string_view cell);

// Quotes a field if it contains a comma, quote or leading/trailing space.
std::string quote_csv(std::string_view field);

} // namespace domepilot::detail
