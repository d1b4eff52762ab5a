#pragma once

#include <string>
#include <string_view>

namespace domepilot {

// Writes `content` to `path` through a sibling temporary file and a rename,
// so a failed run never leaves a partial artifact behind.
void write_file_atomic(const std::string& path, std::string_view content);

std::string read_file(const std::string& path);

} // namespace domepilot
