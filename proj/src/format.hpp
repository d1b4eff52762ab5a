#pragma once

#include <array>
#include <charconv>
#include <string>

namespace domepilot::detail {

// Shortest representation that reads back to the same double.
inline std::string format_double(double v) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return ec == std::errc{} ? std::string(buf.data(), ptr) : std::string("nan");
}

} // namespace domepilot::detail
