#include "domepilot/errors.hpp"
#include "domepilot/knn.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace domepilot;
using namespace domepilot::knn;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<LabeledSample> random_samples(std::mt19937_64& rng, std::size_t n) {
    std::vector<LabeledSample> out(n);
    for (auto& s : out) {
        for (auto& v : s.features) v = uniform(rng, -5, 5);
        s.label = static_cast<Label>(rng() % 2);
    }
    return out;
}

// Sort every training point by (distance, index) and vote among the first k.
Label oracle_predict(const std::vector<LabeledSample>& train, std::size_t k, const Features& q) {
    std::vector<std::pair<double, std::size_t>> d;
    for (std::size_t i = 0; i < train.size(); ++i) {
        double ss = 0.0;
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            ss += (train[i].features[f] - q[f]) * (train[i].features[f] - q[f]);
        }
        d.emplace_back(ss, i);
    }
    std::sort(d.begin(), d.end());
    std::size_t ones = 0;
    for (std::size_t j = 0; j < k; ++j) ones += static_cast<std::size_t>(train[d[j].second].label);
    return 2 * ones > k ? 1 : 0;
}

} // namespace

TEST_CASE("default_k") {
    CHECK(default_k(19964) == 141);
    CHECK(default_k(1) == 1);
    CHECK(default_k(16) == 3);
    CHECK(default_k(5000) == 69);
    CHECK(default_k(3) == 1);
    for (std::size_t n = 1; n < 5000; ++n) {
        const auto k = default_k(n);
        CHECK(k % 2 == 1);
        CHECK(k * k <= n);
    }
    CHECK_THROWS_AS(default_k(0), InvalidArgument);
}

TEST_CASE("train_knn preconditions") {
    std::mt19937_64 rng(1);
    const auto s = random_samples(rng, 3);
    const auto m = train_knn(s, 3, Scaling::none);
    CHECK(m.train().size() == 3);
    CHECK(m.k() == 3);
    CHECK_THROWS_AS(train_knn(s, 0, Scaling::none), InvalidArgument);
    CHECK_THROWS_AS(train_knn(s, 4, Scaling::none), InvalidArgument);
}

TEST_CASE("standardize marks a constant column") {
    std::mt19937_64 rng(2);
    auto s = random_samples(rng, 20);
    for (auto& x : s) x.features[5] = 1020.0;
    const auto m = train_knn(s, 3, Scaling::standardize);
    CHECK(m.scaler().constant[5]);
    CHECK(m.scaler().stddev[5] == 0.0);
    for (std::size_t f = 0; f < 5; ++f) CHECK_FALSE(m.scaler().constant[f]);
    // The constant column contributes nothing, even for a query far off in it.
    Features a = s[0].features;
    Features b = a;
    b[5] = 900.0;
    CHECK(distance(a, b, m.scaler()) == 0.0);
}

TEST_CASE("distance") {
    const Features zero{};
    const Features p{3, 4, 0, 0, 0, 0};
    CHECK(distance(zero, zero) == 0.0);
    CHECK(distance(zero, p) == 5.0);
    const std::vector<double> short_v(5, 0.0);
    CHECK_THROWS_AS(distance(short_v, short_v), InvalidArgument);
    CHECK_THROWS_AS(distance(zero, short_v), InvalidArgument);

    std::mt19937_64 rng(3);
    const auto s = random_samples(rng, 50);
    const auto scaler = Scaler::fit(s);
    for (int i = 0; i < 1000; ++i) {
        Features a{}, b{}, c{};
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            a[f] = uniform(rng, -100, 100);
            b[f] = uniform(rng, -100, 100);
            c[f] = uniform(rng, -100, 100);
        }
        for (const auto* sc : {&scaler, static_cast<const Scaler*>(nullptr)}) {
            const auto& use = sc ? *sc : Scaler::identity();
            const double ab = distance(a, b, use);
            CHECK(ab == distance(b, a, use));
            CHECK(distance(a, a, use) == 0.0);
            CHECK(distance(a, c, use) <= ab + distance(b, c, use) + 1e-9);
        }
    }
}

TEST_CASE("predict small cases") {
    std::vector<LabeledSample> s{{{0, 0, 0, 0, 0, 0}, 1}, {{10, 0, 0, 0, 0, 0}, 0}, {{20, 0, 0, 0, 0, 0}, 0}};
    CHECK(train_knn(s, 1, Scaling::none).predict(Features{0, 0, 0, 0, 0, 0}) == 1);

    std::vector<LabeledSample> t{{{0, 0, 0, 0, 0, 0}, 1},
                                 {{1, 0, 0, 0, 0, 0}, 1},
                                 {{2, 0, 0, 0, 0, 0}, 0},
                                 {{50, 0, 0, 0, 0, 0}, 0},
                                 {{60, 0, 0, 0, 0, 0}, 0}};
    CHECK(train_knn(t, 3, Scaling::none).predict(Features{1, 0, 0, 0, 0, 0}) == 1);

    const std::vector<double> bad(7, 0.0);
    CHECK_THROWS_AS(train_knn(t, 3, Scaling::none).predict(bad), InvalidArgument);
}

TEST_CASE("equal distances are broken by training index") {
    // Two points at the same distance, opposite labels; k = 1 must pick the first.
    std::vector<LabeledSample> s{{{-1, 0, 0, 0, 0, 0}, 0}, {{1, 0, 0, 0, 0, 0}, 1}};
    const auto m = train_knn(s, 1, Scaling::none);
    CHECK(m.predict(Features{}) == 0);
    std::swap(s[0], s[1]);
    CHECK(train_knn(s, 1, Scaling::none).predict(Features{}) == 1);
    CHECK(m.neighbors(Features{}) == std::vector<std::size_t>{0});
}

TEST_CASE("predictions match the sort-and-vote oracle") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 5 + rng() % 60;
        auto train = random_samples(rng, n);
        // Integer coordinates on some trials force many exact distance ties.
        if (trial % 3 == 0) {
            for (auto& x : train) {
                for (auto& v : x.features) v = std::round(v / 3.0);
            }
        }
        std::size_t k = 1 + rng() % n;
        const auto m = train_knn(train, k, Scaling::none);
        for (int q = 0; q < 20; ++q) {
            Features query{};
            for (auto& v : query) v = trial % 3 == 0 ? std::round(uniform(rng, -2, 2)) : uniform(rng, -5, 5);
            CHECK(m.predict(query) == oracle_predict(train, k, query));
        }
    }
}

TEST_CASE("k = n gives the global majority") {
    std::mt19937_64 rng(8);
    const auto s = random_samples(rng, 31);
    const auto ones = std::count_if(s.begin(), s.end(), [](const LabeledSample& x) { return x.label == 1; });
    const Label majority = 2 * ones > 31 ? 1 : 0;
    const auto m = train_knn(s, 31, Scaling::none);
    for (int i = 0; i < 50; ++i) {
        Features q{};
        for (auto& v : q) v = uniform(rng, -50, 50);
        CHECK(m.predict(q) == majority);
    }
}

TEST_CASE("prediction is invariant under permutation of the training set") {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 20; ++trial) {
        auto s = random_samples(rng, 40);
        const auto a = train_knn(s, 7, Scaling::none);
        std::shuffle(s.begin(), s.end(), rng);
        const auto b = train_knn(s, 7, Scaling::none);
        for (int q = 0; q < 20; ++q) {
            Features query{};
            for (auto& v : query) v = uniform(rng, -5, 5);
            CHECK(a.predict(query) == b.predict(query));
        }
    }
}

TEST_CASE("standardized predictions ignore per-column rescaling") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        auto s = random_samples(rng, 60);
        const auto column = static_cast<std::size_t>(rng() % kFeatureCount);
        const double c = uniform(rng, 0.01, 1000.0);
        auto scaled = s;
        for (auto& x : scaled) x.features[column] *= c;
        const auto a = train_knn(s, 5, Scaling::standardize);
        const auto b = train_knn(scaled, 5, Scaling::standardize);
        for (int q = 0; q < 20; ++q) {
            Features query{};
            for (auto& v : query) v = uniform(rng, -5, 5);
            Features query_scaled = query;
            query_scaled[column] *= c;
            CHECK(a.predict(query) == b.predict(query_scaled));
        }
    }
}
