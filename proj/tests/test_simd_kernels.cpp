#include "domepilot/simd/distance.hpp"

#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

using namespace domepilot;
using namespace domepilot::simd;

namespace {

struct Columns {
    std::array<std::vector<double>, kFeatureCount> data;
    ColumnView view() const {
        ColumnView v;
        for (std::size_t f = 0; f < kFeatureCount; ++f) v.columns[f] = data[f].data();
        v.rows = data[0].size();
        return v;
    }
};

Columns random_columns(std::mt19937_64& rng, std::size_t rows) {
    Columns c;
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (auto& col : c.data) {
        col.resize(rows);
        for (auto& v : col) v = u(rng);
    }
    return c;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

} // namespace

TEST_CASE("scalar kernel matches direct summation") {
    std::mt19937_64 rng(5);
    const auto c = random_columns(rng, 13);
    const Features q{1, 2, 3, 4, 5, 6};
    std::vector<double> out(13);
    scalar::squared_distances(c.view(), q, out.data());
    for (std::size_t i = 0; i < 13; ++i) {
        double ss = 0.0;
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            const double d = c.data[f][i] - q[f];
            ss += d * d;
        }
        CHECK(out[i] == ss);
    }
}

TEST_CASE("every compiled level is bit-identical to scalar") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (std::size_t rows : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 64u, 101u, 1000u, 4099u}) {
        CAPTURE(rows);
        const auto c = random_columns(rng, rows);
        for (int trial = 0; trial < 5; ++trial) {
            Features q{};
            for (auto& v : q) v = u(rng);
            std::vector<double> ref(rows);
            scalar::squared_distances(c.view(), q, ref.data());
            for (Level level : {Level::scalar, Level::avx2, Level::neon}) {
                CAPTURE(to_string(level));
                std::vector<double> got(rows);
                kernel_for(level)(c.view(), q, got.data());
                CHECK(bit_equal(ref, got));
                std::vector<double> via_span(rows);
                squared_distances(c.view(), q, via_span, level);
                CHECK(bit_equal(ref, via_span));
            }
        }
    }
}

TEST_CASE("dispatch reports a supported level") {
    CHECK(is_supported(Level::scalar));
    CHECK(is_supported(detected_level()));
    CHECK(is_supported(active_level()));
    MESSAGE("active SIMD level: " << to_string(active_level()));
}

TEST_CASE("span overload rejects short output") {
    std::mt19937_64 rng(7);
    const auto c = random_columns(rng, 10);
    std::vector<double> out(9);
    CHECK_THROWS(squared_distances(c.view(), Features{}, out, Level::scalar));
}
