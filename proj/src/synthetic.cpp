#include "domepilot/synthetic.hpp"

#include "domepilot/errors.hpp"
#include "csv.hpp"
#include "format.hpp"

#include <array>
#include <cmath>
#include <ostream>
#include <random>

namespace domepilot::synthetic {

namespace {

class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}

    // [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    int integer(int lo, int hi_inclusive) {
        return lo + static_cast<int>(unit() * static_cast<double>(hi_inclusive - lo + 1));
    }

private:
    std::mt19937_64 rng_;
};

double round_to(double v, double per_unit) { return std::round(v * per_unit) / per_unit; }

constexpr std::array<double, 10> kVisibilityChoices{1, 2, 3, 10, 12, 14, 16, 16, 16, 16};
constexpr std::array<double, 3> kBarometerBands{1000.0, 1012.0, 1024.0};

} // namespace

const char* condition_for(double visibility, double barometer) noexcept {
    const int band = barometer < 1009.0 ? 0 : (barometer < 1021.0 ? 1 : 2);
    static constexpr std::array<const char*, 3> low_vis{"Duststorm", "Sandstorm", "Haze"};
    static constexpr std::array<const char*, 3> high_vis{"Rain Partly cloudy", "Clear", "Passing clouds"};
    return visibility < 5.0 ? low_vis[static_cast<std::size_t>(band)] : high_vis[static_cast<std::size_t>(band)];
}

std::vector<WeatherObservation> observations(std::size_t n, std::uint64_t seed, const std::string& city) {
    Draw draw(seed);
    std::vector<WeatherObservation> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        WeatherObservation o;
        o.city = city;
        o.date = "2018-01-01";
        o.hour = draw.integer(0, 23);
        o.temp = round_to(draw.uniform(0.0, 50.0), 10.0);
        o.wind = static_cast<double>(draw.integer(0, 6));
        o.humidity = round_to(draw.uniform(0.05, 0.6), 100.0);
        o.visibility = kVisibilityChoices[static_cast<std::size_t>(draw.integer(0, kVisibilityChoices.size() - 1))];
        o.barometer = kBarometerBands[static_cast<std::size_t>(draw.integer(0, 2))] + draw.integer(0, 6);
        o.condition = condition_for(o.visibility, o.barometer);
        out.push_back(std::move(o));
    }
    return out;
}

void write_weather_csv(std::ostream& out, const std::vector<WeatherObservation>& obs, const std::vector<bool>& rain) {
    if (!rain.empty() && rain.size() != obs.size()) throw InvalidArgument("write_weather_csv: rain column length mismatch");
    out << "city,date,time,temp,wind,humidity,barometer,visibility,weather" << (rain.empty() ? "" : ",rain") << '\n';
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const auto& o = obs[i];
        out << detail::quote_csv(o.city) << ',' << o.date << ',' << (o.hour < 10 ? "0" : "") << o.hour << ":00,"
            << detail::format_double(o.temp) << ',' << detail::format_double(o.wind) << ','
            << detail::format_double(o.humidity) << ',' << detail::format_double(o.barometer) << ','
            << detail::format_double(o.visibility) << ',' << detail::quote_csv(o.condition);
        if (!rain.empty()) out << ',' << (rain[i] ? 1 : 0);
        out << '\n';
    }
}

} // namespace domepilot::synthetic
