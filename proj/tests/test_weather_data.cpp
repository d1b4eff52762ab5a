#include "domepilot/errors.hpp"
#include "domepilot/weather_data.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

using namespace domepilot;

namespace {

const char* kHeader = "city,date,time,temp,wind,humidity,barometer,visibility,weather\n";

ParseResult parse(const std::string& text) {
    std::istringstream in(text);
    return parse_dataset(in);
}

} // namespace

TEST_CASE("condition table holds 36 rows") {
    // Written out independently of the implementation's table.
    const std::vector<std::pair<const char*, int>> expected{
        {"Clear", 1}, {"Sunny", 0}, {"Passing clouds", 1}, {"Low level haze", 1}, {"Scattered clouds", 1},
        {"Partly sunny", 1}, {"Broken clouds", 1}, {"Duststorm", 0}, {"Sandstorm", 0}, {"Pleasantly warm", 1},
        {"Thunderstorms passing clouds", 1}, {"Thunderstorms partly sunny", 1}, {"Thundershowers", 1},
        {"Mostly cloudy", 1}, {"Thunderstorms Broken clouds", 1}, {"Thunderstorms Scattered clouds", 1},
        {"Extremely hot", 0}, {"Mild", 1}, {"Thunderstorms Partly clouds", 1}, {"Rain Partly cloudy", 0},
        {"Rain Scattered clouds", 0}, {"Rain Broken clouds", 0}, {"Haze", 1}, {"Overcast", 1}, {"Dense fog", 1},
        {"Rain passing clouds", 0}, {"Rain Mostly cloudy", 0}, {"Rain Partly sunny", 0}, {"Fog", 1},
        {"Hail Partly sunny", 0}, {"Thundershowers passing clouds", 1}, {"More clouds than sun", 1},
        {"Thunderstorms more clouds than sun", 1}, {"Thunderstorms", 1}, {"Partly cloudy", 1}, {"Hail", 0}};
    const auto& table = ConditionTable::builtin();
    REQUIRE(table.size() == 36);
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CAPTURE(expected[i].first);
        CHECK(table.entries()[i].index == static_cast<int>(i) + 1);
        CHECK(table.flag(expected[i].first) == expected[i].second);
    }
}

TEST_CASE("condition lookup normalizes case, whitespace and a trailing period") {
    const auto& table = ConditionTable::builtin();
    CHECK(table.flag("Clear") == 1);
    CHECK(table.flag("Duststorm") == 0);
    CHECK(table.flag("Rain Passing Clouds") == 0);
    CHECK(table.flag("  rain   PASSING\tclouds ") == 0);
    CHECK(table.flag("Passing clouds.") == 1);
    try {
        (void)table.flag("Volcanic ash");
        FAIL("expected UnmappedCondition");
    } catch (const UnmappedCondition& e) {
        CHECK(e.condition() == "Volcanic ash");
    }
}

TEST_CASE("user condition table file") {
    std::istringstream in("condition,flag\n# comment\nClear,0\n\"Windy, dusty\",1\n");
    const auto table = ConditionTable::from_csv(in);
    CHECK(table.size() == 2);
    CHECK(table.flag("clear") == 0);
    CHECK(table.flag("Windy, dusty") == 1);

    std::istringstream dup("Clear,1\nCLEAR,0\n");
    CHECK_THROWS_AS(ConditionTable::from_csv(dup), SchemaError);
    std::istringstream bad_flag("Clear,2\n");
    CHECK_THROWS_AS(ConditionTable::from_csv(bad_flag), SchemaError);
}

TEST_CASE("parse_dataset reads a sample row") {
    const auto r = parse(std::string(kHeader) + "Al Madina,2017-01-01,00:00,21,0,0.33,1020.0,16,Clear\n");
    REQUIRE(r.observations.size() == 1);
    const auto& o = r.observations[0];
    CHECK(o.city == "Al Madina");
    CHECK(o.hour == 0);
    CHECK(o.temp == 21.0);
    CHECK(o.wind == 0.0);
    CHECK(o.humidity == doctest::Approx(0.33));
    CHECK(o.barometer == 1020.0);
    CHECK(o.visibility == 16.0);
    CHECK(o.condition == "Clear");
    CHECK(r.rejected == 0);
}

TEST_CASE("parse_dataset edge cases") {
    SUBCASE("header only") {
        const auto r = parse(kHeader);
        CHECK(r.observations.empty());
        CHECK(r.rejected == 0);
    }
    SUBCASE("unparsable cell rejects only that row") {
        const auto r = parse(std::string(kHeader) + "A,d,01:00,20,1,0.5,1010,10,Clear\n" +
                             "A,d,02:00,abc,1,0.5,1010,10,Clear\n" + "A,d,03:00,22,1,0.5,1010,10,Clear\n");
        CHECK(r.observations.size() == 2);
        CHECK(r.rejected == 1);
        CHECK(r.rows_read == 3);
        CHECK(r.observations[1].hour == 3);
    }
    SUBCASE("missing column names the column") {
        std::istringstream in("city,date,time,temp,wind,humidity,barometer,weather\n");
        try {
            parse_dataset(in);
            FAIL("expected SchemaError");
        } catch (const SchemaError& e) {
            CHECK(std::string(e.what()).find("visibility") != std::string::npos);
        }
    }
    SUBCASE("columns in any order, units and percent humidity") {
        const auto r = parse("weather,visibility,barometer,humidity,wind,temp,time,date,city\n"
                             "Clear.,16 km,1019 mbar,33%,9 km/h,19 °C,1:00 pm,2017-01-02,Al Madina\n");
        REQUIRE(r.observations.size() == 1);
        const auto& o = r.observations[0];
        CHECK(o.hour == 13);
        CHECK(o.humidity == doctest::Approx(0.33));
        CHECK(o.wind == 9.0);
        CHECK(o.temp == 19.0);
        CHECK(o.barometer == 1019.0);
        CHECK(o.condition == "Clear.");
    }
    SUBCASE("hour 24 canonicalizes to 0, out-of-range values reject") {
        const auto r = parse(std::string(kHeader) + "A,d,24:00,20,1,0.5,1010,10,Clear\n" +
                             "A,d,25:00,20,1,0.5,1010,10,Clear\n" + "A,d,01:00,20,1,150%,1010,10,Clear\n" +
                             "A,d,01:00,20,1,0.5,0,10,Clear\n" + "A,d,01:00,20,1,0.5,1010,-1,Clear\n" +
                             "A,d,01:00,20,1,0.5,1010,10,\n");
        REQUIRE(r.observations.size() == 1);
        CHECK(r.observations[0].hour == 0);
        CHECK(r.rejected == 5);
    }
}

TEST_CASE("filter_city") {
    const auto r = parse(std::string(kHeader) + "Al Madina,d,01:00,20,1,0.5,1010,10,Clear\n" +
                         "Jeddah,d,01:00,20,1,0.5,1010,10,Clear\n" + "al  madina,d,02:00,20,1,0.5,1010,10,Clear\n");
    const auto madina = filter_city(r.observations, "AL MADINA");
    REQUIRE(madina.size() == 2);
    CHECK(madina[0].hour == 1);
    CHECK(madina[1].hour == 2);
    CHECK(filter_city(r.observations, "Riyadh").empty());
    const auto again = filter_city(madina, "Al Madina");
    CHECK(again.size() == madina.size());
    CHECK_THROWS_AS(filter_city(r.observations, "  "), InvalidArgument);
}

TEST_CASE("derive_state examples") {
    CHECK(derive_state(1, 21) == 1);
    CHECK(derive_state(1, 30) == 0);
    CHECK(derive_state(0, 20) == 0);
    CHECK(derive_state(1, 16) == 0);
    CHECK(derive_state(1, 27) == 0);
    CHECK(derive_state(1, 16.0001) == 1);
}

TEST_CASE("derive_state equals flag times the open-interval indicator on a 0.5 degree sweep") {
    for (int flag : {0, 1}) {
        for (int step = 0; step <= 120; ++step) {
            const double t = -10.0 + 0.5 * step;
            const int indicator = (t > 16.0 && t < 27.0) ? 1 : 0;
            CHECK(derive_state(flag, t) == flag * indicator);
        }
    }
}

TEST_CASE("to_samples") {
    WeatherObservation row1{"Al Madina", "2017-01-01", 0, 21, 0, 0.33, 1020.0, 16, "Clear"};
    WeatherObservation sand{"Al Madina", "2017-01-01", 5, 20, 3, 0.2, 1010.0, 2, "Sandstorm"};
    WeatherObservation odd{"Al Madina", "2017-01-01", 6, 20, 3, 0.2, 1010.0, 2, "Volcanic ash"};
    const auto r = to_samples({row1, sand, odd, odd}, ConditionTable::builtin());
    REQUIRE(r.samples.size() == 2);
    CHECK(r.samples[0].features == Features{21, 0, 0.33, 0, 16, 1020.0});
    CHECK(r.samples[0].label == 1);
    CHECK(r.samples[1].label == 0);
    CHECK(r.unmapped == 2);
    CHECK(r.unmapped_conditions == std::vector<std::string>{"Volcanic ash"});
    CHECK(r.samples.size() + r.unmapped == 4);

    CHECK(to_samples({}, ConditionTable::builtin()).samples.empty());
}

namespace {

std::vector<LabeledSample> numbered(std::size_t n) {
    std::vector<LabeledSample> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i].features[0] = static_cast<double>(i);
    return v;
}

std::vector<double> keys(const std::vector<LabeledSample>& v) {
    std::vector<double> k;
    for (const auto& s : v) k.push_back(s.features[0]);
    return k;
}

} // namespace

TEST_CASE("split sizes and determinism") {
    const auto s = split(numbered(100), {0.33, 324});
    CHECK(s.test.size() == 33);
    CHECK(s.train.size() == 67);

    const auto a = split(numbered(10), {0.30, 101});
    const auto b = split(numbered(10), {0.30, 101});
    CHECK(keys(a.test) == keys(b.test));
    CHECK(keys(a.train) == keys(b.train));

    CHECK_THROWS_AS(split(numbered(1), {0.3, 1}), InvalidArgument);
    CHECK_THROWS_AS(split(numbered(10), {1.0, 1}), InvalidArgument);
    CHECK_THROWS_AS(split(numbered(10), {0.0, 1}), InvalidArgument);
}

TEST_CASE("split PRNG is the standard 64-bit Mersenne Twister") {
    // The C++ standard fixes the 10000th output of a default-seeded mt19937_64.
    std::mt19937_64 rng;
    rng.discard(9999);
    CHECK(rng() == 9981545732273789042ULL);
}

TEST_CASE("split permutations for seeds 101 and 102 are frozen and differ") {
    // Frozen from an independent Python mt19937_64 + Fisher-Yates implementation.
    const std::vector<std::size_t> p101 = split_permutation(10, 101);
    const std::vector<std::size_t> p102 = split_permutation(10, 102);
    CHECK(p101 == std::vector<std::size_t>{8, 0, 5, 3, 2, 6, 1, 4, 9, 7});
    CHECK(p102 == std::vector<std::size_t>{9, 1, 8, 7, 6, 4, 2, 5, 3, 0});
    CHECK(p101 != p102);
    const auto a = split(numbered(10), {0.30, 101});
    const auto b = split(numbered(10), {0.30, 102});
    CHECK(keys(a.test) != keys(b.test));
}

TEST_CASE("split partitions the input for every n in [2, 1000]") {
    std::mt19937_64 fractions(5);
    for (std::size_t n = 2; n <= 1000; ++n) {
        const double frac = 0.05 + 0.9 * static_cast<double>(fractions() >> 11) * 0x1.0p-53;
        const auto s = split(numbered(n), {frac, n});
        CHECK(s.test.size() == static_cast<std::size_t>(std::llround(static_cast<double>(n) * frac)));
        auto all = keys(s.train);
        const auto t = keys(s.test);
        all.insert(all.end(), t.begin(), t.end());
        std::sort(all.begin(), all.end());
        bool identity = all.size() == n;
        for (std::size_t i = 0; identity && i < n; ++i) identity = all[i] == static_cast<double>(i);
        CHECK(identity);
    }
}

TEST_CASE("labeled CSV round trip") {
    std::vector<LabeledSample> v{{{21, 0, 0.33, 0, 16, 1020.0}, 1}, {{19.1, 9, 0.35, 1, 16, 1019.5}, 0}};
    std::ostringstream out;
    write_labeled_csv(out, v);
    CHECK(out.str().rfind("temp,wind,humidity,hour,visibility,barometer,state\n", 0) == 0);
    std::istringstream in(out.str());
    CHECK(read_labeled_csv(in) == v);

    std::istringstream bad("temp,wind,humidity,hour,visibility,barometer,state\n1,2,3,4,5,6,2\n");
    CHECK_THROWS_AS(read_labeled_csv(bad), SchemaError);
}
