#include "domepilot/knn.hpp"

#include "domepilot/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace domepilot::knn {

std::string_view to_string(Scaling s) noexcept {
    return s == Scaling::standardize ? "standardize" : "none";
}

Scaling scaling_from_string(std::string_view s) {
    if (s == "none") return Scaling::none;
    if (s == "standardize") return Scaling::standardize;
    throw InvalidArgument("unknown scaling '" + std::string(s) + "' (expected none or standardize)");
}

std::size_t default_k(std::size_t n) {
    if (n == 0) throw InvalidArgument("default_k: n must be at least 1");
    auto k = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    // sqrt in double can land one off for large n; settle on the exact floor.
    while (k * k > n) --k;
    while ((k + 1) * (k + 1) <= n) ++k;
    if (k % 2 == 0) --k;
    return std::max<std::size_t>(k, 1);
}

Scaler Scaler::fit(std::span<const LabeledSample> samples) {
    if (samples.empty()) throw InvalidArgument("Scaler::fit: no samples");
    Scaler s;
    s.scaling = Scaling::standardize;
    const double n = static_cast<double>(samples.size());
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        double sum = 0.0;
        double lo = samples.front().features[f];
        double hi = lo;
        for (const auto& x : samples) {
            sum += x.features[f];
            lo = std::min(lo, x.features[f]);
            hi = std::max(hi, x.features[f]);
        }
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& x : samples) {
            const double d = x.features[f] - mean;
            ss += d * d;
        }
        s.mean[f] = mean;
        s.stddev[f] = lo == hi ? 0.0 : std::sqrt(ss / n);
        s.constant[f] = !(s.stddev[f] > 0.0);
    }
    return s;
}

Scaler Scaler::from_stats(const Features& mean, const Features& stddev) {
    Scaler s;
    s.scaling = Scaling::standardize;
    s.mean = mean;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        if (!(stddev[f] >= 0.0) || !std::isfinite(stddev[f]) || !std::isfinite(mean[f])) {
            throw InvalidArgument("scaler: invalid statistics for feature " + std::string(kFeatureNames[f]));
        }
        s.stddev[f] = stddev[f];
        s.constant[f] = stddev[f] == 0.0;
    }
    return s;
}

Features Scaler::apply(const Features& x) const noexcept {
    if (scaling == Scaling::none) return x;
    Features out{};
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        out[f] = constant[f] ? 0.0 : (x[f] - mean[f]) / stddev[f];
    }
    return out;
}

namespace {

Features to_features(std::span<const double> v, const char* what) {
    if (v.size() != kFeatureCount) {
        throw InvalidArgument(std::string(what) + ": expected " + std::to_string(kFeatureCount) +
                              " features, got " + std::to_string(v.size()));
    }
    Features f{};
    std::copy(v.begin(), v.end(), f.begin());
    return f;
}

} // namespace

double distance(std::span<const double> a, std::span<const double> b, const Scaler& scaler) {
    if (a.size() != b.size()) throw InvalidArgument("distance: arity mismatch");
    const auto sa = scaler.apply(to_features(a, "distance"));
    const auto sb = scaler.apply(to_features(b, "distance"));
    double acc = 0.0;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        const double d = sa[f] - sb[f];
        acc += d * d;
    }
    return std::sqrt(acc);
}

KnnModel::KnnModel(std::vector<LabeledSample> train, std::size_t k, Scaler scaler)
    : train_(std::move(train)), k_(k), scaler_(scaler) {
    if (k_ == 0) throw InvalidArgument("knn: k must be at least 1");
    if (k_ > train_.size()) {
        throw InvalidArgument("knn: k = " + std::to_string(k_) + " exceeds training size " +
                              std::to_string(train_.size()));
    }
    for (auto& col : columns_) col.resize(train_.size());
    for (std::size_t i = 0; i < train_.size(); ++i) {
        if (train_[i].label != 0 && train_[i].label != 1) throw InvalidArgument("knn: labels must be 0 or 1");
        const auto x = scaler_.apply(train_[i].features);
        for (std::size_t f = 0; f < kFeatureCount; ++f) columns_[f][i] = x[f];
    }
}

simd::ColumnView KnnModel::view() const noexcept {
    simd::ColumnView v;
    for (std::size_t f = 0; f < kFeatureCount; ++f) v.columns[f] = columns_[f].data();
    v.rows = train_.size();
    return v;
}

std::vector<std::size_t> KnnModel::neighbors(std::span<const double> query, simd::Level level) const {
    const auto q = scaler_.apply(to_features(query, "knn predict"));
    std::vector<double> dist(train_.size());
    simd::squared_distances(view(), q, dist, level);

    std::vector<std::size_t> order(train_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto closer = [&](std::size_t a, std::size_t b) { return dist[a] < dist[b] || (dist[a] == dist[b] && a < b); };
    const auto kth = order.begin() + static_cast<std::ptrdiff_t>(k_);
    if (k_ < order.size()) std::nth_element(order.begin(), kth - 1, order.end(), closer);
    order.resize(k_);
    std::sort(order.begin(), order.end(), closer);
    return order;
}

Label KnnModel::predict(std::span<const double> query, simd::Level level) const {
    std::size_t ones = 0;
    for (auto i : neighbors(query, level)) ones += train_[i].label == 1 ? 1 : 0;
    // Strict majority for class 1; an even-k tie goes to 0 (close).
    return 2 * ones > k_ ? 1 : 0;
}

KnnModel train_knn(std::vector<LabeledSample> samples, std::size_t k, Scaling scaling) {
    if (k == 0) throw InvalidArgument("knn: k must be at least 1");
    if (k > samples.size()) {
        throw InvalidArgument("knn: k = " + std::to_string(k) + " exceeds training size " +
                              std::to_string(samples.size()));
    }
    Scaler scaler = scaling == Scaling::standardize ? Scaler::fit(samples) : Scaler::identity();
    return KnnModel(std::move(samples), k, scaler);
}

} // namespace domepilot::knn
