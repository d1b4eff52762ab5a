#include "domepilot/condition_table.hpp"

#include "domepilot/errors.hpp"
#include "csv.hpp"

#include <cctype>
#include <fstream>
#include <istream>

namespace domepilot {

std::string normalize_condition(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char ch : raw) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    while (!out.empty() && (out.back() == '.' || out.back() == ' ')) {
        out.pop_back();
    }
    return out;
}

ConditionTable::ConditionTable(std::vector<ConditionEntry> entries) : entries_(std::move(entries)) {
    for (const auto& e : entries_) {
        if (e.flag != 0 && e.flag != 1) {
            throw SchemaError("condition table: flag for \"" + e.condition + "\" must be 0 or 1");
        }
        auto key = normalize_condition(e.condition);
        if (key.empty()) {
            throw SchemaError("condition table: empty condition at row " + std::to_string(e.index));
        }
        if (!lookup_.emplace(std::move(key), e.flag).second) {
            throw SchemaError("condition table: duplicate condition \"" + e.condition + "\"");
        }
    }
}

const ConditionTable& ConditionTable::builtin() {
    static const ConditionTable table{{
        {1, "Clear", 1},
        {2, "Sunny", 0},
        {3, "Passing clouds", 1},
        {4, "Low level haze", 1},
        {5, "Scattered clouds", 1},
        {6, "Partly sunny", 1},
        {7, "Broken clouds", 1},
        {8, "Duststorm", 0},
        {9, "Sandstorm", 0},
        {10, "Pleasantly warm", 1},
        {11, "Thunderstorms passing clouds", 1},
        {12, "Thunderstorms partly sunny", 1},
        {13, "Thundershowers", 1},
        {14, "Mostly cloudy", 1},
        {15, "Thunderstorms Broken clouds", 1},
        {16, "Thunderstorms Scattered clouds", 1},
        {17, "Extremely hot", 0},
        {18, "Mild", 1},
        {19, "Thunderstorms Partly clouds", 1},
        {20, "Rain Partly cloudy", 0},
        {21, "Rain Scattered clouds", 0},
        {22, "Rain Broken clouds", 0},
        {23, "Haze", 1},
        {24, "Overcast", 1},
        {25, "Dense fog", 1},
        {26, "Rain passing clouds", 0},
        {27, "Rain Mostly cloudy", 0},
        {28, "Rain Partly sunny", 0},
        {29, "Fog", 1},
        {30, "Hail Partly sunny", 0},
        {31, "Thundershowers passing clouds", 1},
        {32, "More clouds than sun", 1},
        {33, "Thunderstorms more clouds than sun", 1},
        {34, "Thunderstorms", 1},
        {35, "Partly cloudy", 1},
        {36, "Hail", 0},
    }};
    return table;
}

ConditionTable ConditionTable::from_csv(std::istream& in) {
    std::vector<ConditionEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        auto fields = detail::split_csv_line(line);
        if (fields.size() != 2) {
            throw SchemaError("condition table line " + std::to_string(line_no) + ": expected `condition,flag`");
        }
        if (entries.empty() && normalize_condition(fields[0]) == "condition") continue;
        const auto flag_text = detail::trim(fields[1]);
        if (flag_text != "0" && flag_text != "1") {
            throw SchemaError("condition table line " + std::to_string(line_no) + ": flag must be 0 or 1");
        }
        entries.push_back({static_cast<int>(entries.size()) + 1, std::string(detail::trim(fields[0])),
                           flag_text == "1" ? 1 : 0});
    }
    return ConditionTable(std::move(entries));
}

ConditionTable ConditionTable::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open condition table " + path);
    return from_csv(in);
}

int ConditionTable::flag(std::string_view condition) const {
    const auto it = lookup_.find(normalize_condition(condition));
    if (it == lookup_.end()) throw UnmappedCondition(std::string(condition));
    return it->second;
}

bool ConditionTable::contains(std::string_view condition) const {
    return lookup_.count(normalize_condition(condition)) != 0;
}

} // namespace domepilot
