// Writes a synthetic weather CSV in the raw input schema, for demos and tests
// when the real dataset is not at hand.

#include "domepilot/synthetic.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>

int main(int argc, char* argv[]) {
    CLI::App app{"Generate synthetic hourly weather records", "make_synthetic"};
    std::size_t rows = 5000;
    std::uint64_t seed = 7;
    std::string city = "Al Madina";
    double rain_prob = -1.0;
    std::string out_path;
    app.add_option("--rows", rows, "Number of records")->capture_default_str();
    app.add_option("--seed", seed, "Generator seed")->capture_default_str();
    app.add_option("--city", city, "City name written to every record")->capture_default_str();
    app.add_option("--rain-prob", rain_prob, "Add a rain column with this probability of rain (frames for simulate)")
        ->check(CLI::Range(0.0, 1.0));
    app.add_option("--out", out_path, "Output CSV")->required();
    CLI11_PARSE(app, argc, argv);

    const auto obs = domepilot::synthetic::observations(rows, seed, city);
    std::vector<bool> rain;
    if (rain_prob >= 0.0) {
        std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
        for (std::size_t i = 0; i < obs.size(); ++i) {
            rain.push_back(static_cast<double>(rng() >> 11) * 0x1.0p-53 < rain_prob);
        }
    }
    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "error: cannot write " << out_path << '\n';
        return 1;
    }
    domepilot::synthetic::write_weather_csv(out, obs, rain);
    return out ? 0 : 1;
}
