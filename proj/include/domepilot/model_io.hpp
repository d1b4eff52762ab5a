#pragma once

#include "domepilot/dtree.hpp"
#include "domepilot/knn.hpp"
#include "domepilot/weather_data.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>

namespace domepilot {

inline constexpr int kModelFormatVersion = 1;

using AnyModel = std::variant<dtree::TreeModel, knn::KnnModel>;

// A trained model plus the split it was trained under, so evaluation can
// rebuild the matching held-out set.
struct StoredModel {
    AnyModel model;
    std::optional<SplitSpec> split;
};

std::string_view model_kind(const AnyModel& model) noexcept; // "dt" or "knn"
Label predict(const AnyModel& model, std::span<const double> features);

// Versioned JSON document. Tree: {format, version, kind:"dt", config, split?,
// nodes:[{id, ...}]}. k-NN: {format, version, kind:"knn", k, scaling, stats?,
// split?, data:[[6 features, label], ...]}.
std::string to_json(const StoredModel& stored);
StoredModel from_json(const std::string& text);

// Writes to a temporary file in the same directory, then renames over `path`.
void save_model(const std::string& path, const StoredModel& stored);
// Throws ModelFormatError for truncated/invalid documents or a version other
// than kModelFormatVersion.
StoredModel load_model(const std::string& path);

} // namespace domepilot
