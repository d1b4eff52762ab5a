#include "domepilot/weather_data.hpp"

#include "domepilot/errors.hpp"
#include "csv.hpp"
#include "format.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <unordered_set>

namespace domepilot {

namespace {

constexpr std::array<std::string_view, 9> kRequiredColumns{
    "city", "date", "time", "temp", "wind", "humidity", "barometer", "visibility", "weather"};

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// "HH:MM", "H:MM", "HH:MM:SS", with an optional am/pm suffix. Hour 24 maps to 0.
std::optional<int> parse_hour(std::string_view cell) {
    auto s = detail::trim(cell);
    const auto colon = s.find(':');
    if (colon == std::string_view::npos || colon == 0 || colon > 2) return std::nullopt;
    int hour = 0;
    for (char c : s.substr(0, colon)) {
        if (c < '0' || c > '9') return std::nullopt;
        hour = hour * 10 + (c - '0');
    }
    auto rest = s.substr(colon + 1);
    if (rest.size() < 2 || !std::isdigit(static_cast<unsigned char>(rest[0])) ||
        !std::isdigit(static_cast<unsigned char>(rest[1]))) {
        return std::nullopt;
    }
    const auto suffix = lower(detail::trim(rest.substr(std::min<std::size_t>(rest.size(), rest.find_first_not_of("0123456789:")))));
    if (suffix == "am" || suffix == "a.m.") {
        if (hour < 1 || hour > 12) return std::nullopt;
        hour %= 12;
    } else if (suffix == "pm" || suffix == "p.m.") {
        if (hour < 1 || hour > 12) return std::nullopt;
        hour = hour % 12 + 12;
    } else if (!suffix.empty()) {
        return std::nullopt;
    }
    if (hour == 24) hour = 0;
    if (hour < 0 || hour > 23) return std::nullopt;
    return hour;
}

// "33%" -> 0.33; bare numbers above 1 are read as percent, otherwise as a fraction.
std::optional<double> parse_humidity(std::string_view cell) {
    const auto s = detail::trim(cell);
    const bool percent = !s.empty() && s.back() == '%';
    auto value = percent ? detail::parse_number(s.substr(0, s.size() - 1)) : detail::parse_number(s);
    if (!value) return std::nullopt;
    double v = *value;
    if (percent || v > 1.0) v /= 100.0;
    if (v < 0.0 || v > 1.0) return std::nullopt;
    return v;
}

} // namespace

ParseResult parse_dataset(std::istream& in) { return parse_dataset(in, {}, nullptr); }

ParseResult parse_dataset(std::istream& in, const std::vector<std::string>& extra_columns,
                          std::vector<std::vector<std::string>>* extra_values) {
    ParseResult result;
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("dataset is empty (no header row)");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = detail::split_csv_line(line);
    auto column_of = [&](std::string_view name) -> std::size_t {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (lower(detail::trim(header[i])) == name) return i;
        }
        throw SchemaError("dataset is missing required column '" + std::string(name) + "'");
    };

    std::array<std::size_t, kRequiredColumns.size()> col{};
    for (std::size_t i = 0; i < kRequiredColumns.size(); ++i) col[i] = column_of(kRequiredColumns[i]);
    std::vector<std::size_t> extra_col;
    for (const auto& name : extra_columns) extra_col.push_back(column_of(lower(name)));
    const std::size_t needed = std::max(*std::max_element(col.begin(), col.end()) + 1,
                                        extra_col.empty() ? 0 : *std::max_element(extra_col.begin(), extra_col.end()) + 1);

    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::trim(line).empty()) continue;
        ++result.rows_read;
        const auto f = detail::split_csv_line(line);
        if (f.size() < needed) {
            ++result.rejected;
            continue;
        }
        WeatherObservation obs;
        obs.city = std::string(detail::trim(f[col[0]]));
        obs.date = std::string(detail::trim(f[col[1]]));
        const auto hour = parse_hour(f[col[2]]);
        const auto temp = detail::parse_measure(f[col[3]]);
        const auto wind = detail::parse_measure(f[col[4]]);
        const auto humidity = parse_humidity(f[col[5]]);
        const auto barometer = detail::parse_measure(f[col[6]]);
        const auto visibility = detail::parse_measure(f[col[7]]);
        obs.condition = std::string(detail::trim(f[col[8]]));
        if (!hour || !temp || !wind || !humidity || !barometer || !visibility || obs.condition.empty() ||
            *barometer <= 0.0 || *visibility < 0.0 || *wind < 0.0) {
            ++result.rejected;
            continue;
        }
        obs.hour = *hour;
        obs.temp = *temp;
        obs.wind = *wind;
        obs.humidity = *humidity;
        obs.barometer = *barometer;
        obs.visibility = *visibility;
        result.observations.push_back(std::move(obs));
        if (extra_values != nullptr) {
            std::vector<std::string> extras;
            for (auto c : extra_col) extras.emplace_back(detail::trim(f[c]));
            extra_values->push_back(std::move(extras));
        }
    }
    return result;
}

std::vector<WeatherObservation> filter_city(const std::vector<WeatherObservation>& observations,
                                            std::string_view city_name) {
    if (detail::trim(city_name).empty()) throw InvalidArgument("filter_city: city name is empty");
    const auto wanted = normalize_condition(city_name);
    std::vector<WeatherObservation> out;
    std::copy_if(observations.begin(), observations.end(), std::back_inserter(out),
                 [&](const WeatherObservation& o) { return normalize_condition(o.city) == wanted; });
    return out;
}

Label derive_state(int flag, double temp, const TemperatureGate& gate) {
    return (flag == 1 && gate.admits(temp)) ? 1 : 0;
}

LabelingResult to_samples(const std::vector<WeatherObservation>& observations, const ConditionTable& table,
                          const TemperatureGate& gate) {
    LabelingResult result;
    result.samples.reserve(observations.size());
    std::unordered_set<std::string> seen;
    for (const auto& obs : observations) {
        if (!table.contains(obs.condition)) {
            ++result.unmapped;
            if (seen.insert(obs.condition).second) result.unmapped_conditions.push_back(obs.condition);
            continue;
        }
        result.samples.push_back({obs.features(), derive_state(table.flag(obs.condition), obs.temp, gate)});
    }
    return result;
}

std::size_t test_size(std::size_t n, double test_fraction) {
    return static_cast<std::size_t>(std::llround(static_cast<double>(n) * test_fraction));
}

std::vector<std::size_t> split_permutation(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::mt19937_64 rng(seed);
    // Unbiased draw from [0, bound) by rejecting the short tail of the 64-bit range.
    auto bounded = [&rng](std::uint64_t bound) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t r;
        do {
            r = rng();
        } while (r >= limit);
        return r % bound;
    };
    for (std::size_t i = n; i > 1; --i) {
        const auto j = static_cast<std::size_t>(bounded(i));
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

Split split(const std::vector<LabeledSample>& samples, const SplitSpec& spec) {
    if (samples.size() < 2) throw InvalidArgument("split: need at least 2 samples");
    if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
        throw InvalidArgument("split: test fraction must lie in (0, 1)");
    }
    const auto perm = split_permutation(samples.size(), spec.seed);
    const auto n_test = test_size(samples.size(), spec.test_fraction);
    Split out;
    out.test.reserve(n_test);
    out.train.reserve(samples.size() - n_test);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        (i < n_test ? out.test : out.train).push_back(samples[perm[i]]);
    }
    return out;
}

void write_labeled_csv(std::ostream& out, const std::vector<LabeledSample>& samples) {
    out << "temp,wind,humidity,hour,visibility,barometer,state\n";
    for (const auto& s : samples) {
        for (double v : s.features) out << detail::format_double(v) << ',';
        out << s.label << '\n';
    }
}

std::vector<LabeledSample> read_labeled_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("labeled dataset is empty (no header row)");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = detail::split_csv_line(line);
    std::array<std::size_t, kFeatureCount + 1> col{};
    for (std::size_t k = 0; k <= kFeatureCount; ++k) {
        const std::string_view name = k < kFeatureCount ? kFeatureNames[k] : "state";
        auto it = std::find_if(header.begin(), header.end(),
                               [&](const std::string& h) { return lower(detail::trim(h)) == name; });
        if (it == header.end()) {
            throw SchemaError("labeled dataset is missing required column '" + std::string(name) + "'");
        }
        col[k] = static_cast<std::size_t>(it - header.begin());
    }
    std::vector<LabeledSample> samples;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::trim(line).empty()) continue;
        const auto f = detail::split_csv_line(line);
        LabeledSample s;
        for (std::size_t k = 0; k <= kFeatureCount; ++k) {
            const auto v = col[k] < f.size() ? detail::parse_number(f[col[k]]) : std::nullopt;
            if (!v) {
                throw SchemaError("labeled dataset line " + std::to_string(line_no) + ": bad value in column " +
                                  std::to_string(col[k] + 1));
            }
            if (k < kFeatureCount) {
                s.features[k] = *v;
            } else if (*v == 0.0 || *v == 1.0) {
                s.label = static_cast<Label>(*v);
            } else {
                throw SchemaError("labeled dataset line " + std::to_string(line_no) + ": state must be 0 or 1");
            }
        }
        samples.push_back(s);
    }
    return samples;
}

} // namespace domepilot
