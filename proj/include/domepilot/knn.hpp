#pragma once

#include "domepilot/simd/distance.hpp"
#include "domepilot/weather_data.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace domepilot::knn {

enum class Scaling { none, standardize };

std::string_view to_string(Scaling s) noexcept;
Scaling scaling_from_string(std::string_view s);

// floor(sqrt(n)), made odd by decrementing; at least 1.
std::size_t default_k(std::size_t n);

// Per-feature affine map applied before measuring distance. Identity for
// Scaling::none; z-score for Scaling::standardize, where a constant column
// maps to 0 and so never contributes to a distance.
struct Scaler {
    Scaling scaling = Scaling::none;
    Features mean{};
    Features stddev{};                    // population standard deviation
    std::array<bool, kFeatureCount> constant{};

    static Scaler identity() { return {}; }
    static Scaler fit(std::span<const LabeledSample> samples);
    static Scaler from_stats(const Features& mean, const Features& stddev);

    Features apply(const Features& x) const noexcept;
};

// Euclidean distance after scaling. Throws InvalidArgument on arity mismatch.
double distance(std::span<const double> a, std::span<const double> b, const Scaler& scaler = Scaler::identity());

class KnnModel {
public:
    // Stores the training set verbatim. Throws InvalidArgument when k == 0 or k > n.
    KnnModel(std::vector<LabeledSample> train, std::size_t k, Scaler scaler);

    Label predict(std::span<const double> query, simd::Level level = simd::active_level()) const;

    // Indices of the k nearest training points, nearest first; equal distances
    // are ordered by training index.
    std::vector<std::size_t> neighbors(std::span<const double> query,
                                       simd::Level level = simd::active_level()) const;

    std::size_t k() const noexcept { return k_; }
    const Scaler& scaler() const noexcept { return scaler_; }
    Scaling scaling() const noexcept { return scaler_.scaling; }
    const std::vector<LabeledSample>& train() const noexcept { return train_; }

private:
    std::vector<LabeledSample> train_;
    std::size_t k_;
    Scaler scaler_;
    std::array<std::vector<double>, kFeatureCount> columns_; // scaled, column-major

    simd::ColumnView view() const noexcept;
};

KnnModel train_knn(std::vector<LabeledSample> samples, std::size_t k, Scaling scaling);

} // namespace domepilot::knn
