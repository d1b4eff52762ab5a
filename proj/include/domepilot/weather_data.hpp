#pragma once

#include "domepilot/condition_table.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace domepilot {

inline constexpr std::size_t kFeatureCount = 6;

// Fixed feature order used by every model.
enum class Feature : std::size_t { temp = 0, wind, humidity, hour, visibility, barometer };

inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames{
    "temp", "wind", "humidity", "hour", "visibility", "barometer"};

using Features = std::array<double, kFeatureCount>;

// Dome state: 1 = open, 0 = close.
using Label = int;

struct WeatherObservation {
    std::string city;
    std::string date;      // as given in the source, e.g. "2017-01-01"
    int hour = 0;          // 0..23
    double temp = 0.0;     // degrees Celsius
    double wind = 0.0;     // km/h
    double humidity = 0.0; // fraction in [0, 1]
    double barometer = 0.0;
    double visibility = 0.0;
    std::string condition;

    Features features() const noexcept {
        return {temp, wind, humidity, static_cast<double>(hour), visibility, barometer};
    }
};

struct LabeledSample {
    Features features{};
    Label label = 0;

    friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

// Counts collected while reading and labeling; every input row ends up in
// exactly one bucket.
struct CleaningReport {
    std::size_t rows_read = 0;      // data rows seen in the CSV
    std::size_t parsed = 0;         // rows that became observations
    std::size_t rejected = 0;       // rows with missing or unparsable cells
    std::size_t city_matched = 0;   // observations kept by filter_city
    std::size_t unmapped = 0;       // observations whose condition has no table entry
    std::size_t labeled = 0;        // samples produced
    std::vector<std::string> unmapped_conditions; // distinct raw strings, first-seen order
};

struct ParseResult {
    std::vector<WeatherObservation> observations;
    std::size_t rejected = 0;
    std::size_t rows_read = 0;
};

// Reads the weather CSV. Required header columns, any order:
// city,date,time,temp,wind,humidity,barometer,visibility,weather.
// A missing column throws SchemaError; a bad cell rejects only that row.
// `extra_columns` are additional required names (e.g. "rain" for replay frames);
// their raw cell text is returned through `extra_values` when non-null.
ParseResult parse_dataset(std::istream& in);
ParseResult parse_dataset(std::istream& in, const std::vector<std::string>& extra_columns,
                          std::vector<std::vector<std::string>>* extra_values);

// Case-insensitive city match (whitespace-normalized). Prints nothing; callers
// decide how to surface an empty result.
std::vector<WeatherObservation> filter_city(const std::vector<WeatherObservation>& observations,
                                            std::string_view city_name);

// Temperatures strictly inside this open interval keep a flag-1 dome open.
struct TemperatureGate {
    double low = 16.0;
    double high = 27.0;

    bool admits(double temp) const noexcept { return temp > low && temp < high; }
};

// 1 iff flag == 1 and the temperature lies strictly inside the gate.
Label derive_state(int flag, double temp, const TemperatureGate& gate = {});

struct LabelingResult {
    std::vector<LabeledSample> samples;
    std::size_t unmapped = 0;
    std::vector<std::string> unmapped_conditions;
};

LabelingResult to_samples(const std::vector<WeatherObservation>& observations, const ConditionTable& table,
                          const TemperatureGate& gate = {});

struct SplitSpec {
    double test_fraction = 0.33;
    std::uint64_t seed = 324;
};

struct Split {
    std::vector<LabeledSample> train;
    std::vector<LabeledSample> test;
};

// Index permutation used by split(): Fisher-Yates over [0, n) driven by
// std::mt19937_64(seed). The first round(n * test_fraction) indices form the test set.
std::vector<std::size_t> split_permutation(std::size_t n, std::uint64_t seed);
std::size_t test_size(std::size_t n, double test_fraction);

// Throws InvalidArgument when fewer than two samples or fraction outside (0, 1).
Split split(const std::vector<LabeledSample>& samples, const SplitSpec& spec);

// Labeled dataset CSV: temp,wind,humidity,hour,visibility,barometer,state
void write_labeled_csv(std::ostream& out, const std::vector<LabeledSample>& samples);
std::vector<LabeledSample> read_labeled_csv(std::istream& in);

} // namespace domepilot
