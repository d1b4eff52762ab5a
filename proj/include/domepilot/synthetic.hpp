#pragma once

#include "domepilot/weather_data.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace domepilot::synthetic {

// Hourly observations whose weather description is a fixed function of the
// (visibility, barometer) bucket. The dome label is then a deterministic
// function of the six features:
//
//   visibility < 5 km : Duststorm | Sandstorm | Haze            (barometer low | mid | high)
//   visibility >= 5 km: Rain Partly cloudy | Clear | Passing clouds
//
// Barometer readings are drawn from three disjoint bands around 1000, 1012
// and 1024 hPa. Same (n, seed) always yields the same records.
std::vector<WeatherObservation> observations(std::size_t n, std::uint64_t seed, const std::string& city = "Synthetic");

// Condition the generator assigns to a (visibility, barometer) pair.
const char* condition_for(double visibility, double barometer) noexcept;

// Writes the raw weather CSV schema; with `rain` non-empty, appends a `rain`
// column taken from it (one entry per observation).
void write_weather_csv(std::ostream& out, const std::vector<WeatherObservation>& obs,
                       const std::vector<bool>& rain = {});

} // namespace domepilot::synthetic
