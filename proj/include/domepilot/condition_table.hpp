#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace domepilot {

// Case-folds, collapses internal whitespace runs to one space, trims, and
// drops a trailing period ("Clear." -> "clear").
std::string normalize_condition(std::string_view raw);

struct ConditionEntry {
    int index = 0;          // 1-based row number
    std::string condition;  // as written in the table
    int flag = 0;           // 1 = weather alone permits opening
};

// Immutable mapping from weather description to open-compatibility flag.
class ConditionTable {
public:
    // The 36-row transformation table used to label the Saudi weather data.
    static const ConditionTable& builtin();

    // Reads `condition,flag` lines. A header line `condition,flag` is optional;
    // blank lines and lines starting with '#' are skipped.
    static ConditionTable from_csv(std::istream& in);
    static ConditionTable from_file(const std::string& path);

    explicit ConditionTable(std::vector<ConditionEntry> entries);

    // Throws UnmappedCondition when the normalized string has no entry.
    int flag(std::string_view condition) const;
    bool contains(std::string_view condition) const;

    const std::vector<ConditionEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }

private:
    std::vector<ConditionEntry> entries_;
    std::unordered_map<std::string, int> lookup_;
};

} // namespace domepilot
