#pragma once

#include "domepilot/dtree.hpp"
#include "domepilot/knn.hpp"
#include "domepilot/weather_data.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace domepilot::cli {

// Every flag of every subcommand. Defaults:
// decision tree with 50 leaves and split seed 324 at 33% test; k-NN with
// k = sqrt rule and split seed 101 at 30% test.
struct RunConfig {
    std::string command;

    std::string data_path;
    std::string city = "Al Madina";
    std::string table_path;
    std::string out_path;
    std::string report_path;
    std::string sha256;

    std::string model_kind = "dt";
    dtree::TreeConfig tree{};
    std::string criterion = "gini";
    std::string k = "auto";
    std::string scaling = "none";
    std::optional<double> test_fraction;
    std::optional<std::uint64_t> seed;

    std::string model_path;
    std::string confusion_csv;
    std::string frames_path;
    std::string log_path;
    std::string sink;

    double temp = 0.0;
    double wind = 0.0;
    double humidity = 0.0;
    double hour = 0.0;
    double visibility = 0.0;
    double barometer = 0.0;
    int rain = 0;
};

// Split used when neither flags nor the model file specify one.
SplitSpec default_split(const std::string& model_kind);

// Entry point shared by the executable and the tests. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace domepilot::cli
