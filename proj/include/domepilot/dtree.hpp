#pragma once

#include "domepilot/weather_data.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace domepilot::dtree {

enum class Criterion { gini, entropy };

std::string_view to_string(Criterion c) noexcept;
Criterion criterion_from_string(std::string_view s);

struct TreeConfig {
    Criterion criterion = Criterion::gini;
    std::size_t max_leaf_nodes = 50;
    std::size_t min_samples_leaf = 1;
    std::uint64_t seed = 324; // accepted for symmetry with the split seed; growth is deterministic

    friend bool operator==(const TreeConfig&, const TreeConfig&) = default;
};

using ClassCounts = std::array<std::size_t, 2>;

// Node impurity from class counts. Throws InvalidArgument on an empty node.
double impurity(const ClassCounts& counts, Criterion criterion);

struct Node {
    static constexpr int kNone = -1;

    int feature = kNone;     // kNone for leaves
    double threshold = 0.0;  // go left iff x[feature] <= threshold
    int left = kNone;
    int right = kNone;
    double impurity = 0.0;
    ClassCounts counts{};    // training class counts reaching this node
    Label label = 0;         // majority class, ties -> 0

    bool is_leaf() const noexcept { return feature == kNone; }
    std::size_t n() const noexcept { return counts[0] + counts[1]; }

    friend bool operator==(const Node&, const Node&) = default;
};

class TreeModel {
public:
    TreeModel() = default;
    TreeModel(TreeConfig config, std::vector<Node> nodes);

    // Throws InvalidArgument if the vector does not have kFeatureCount entries.
    Label predict(std::span<const double> features) const;

    // Id of the leaf a feature vector routes to.
    int leaf_of(std::span<const double> features) const;

    const TreeConfig& config() const noexcept { return config_; }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    std::size_t leaf_count() const noexcept;

    friend bool operator==(const TreeModel&, const TreeModel&) = default;

private:
    TreeConfig config_{};
    std::vector<Node> nodes_;
};

struct SplitCandidate {
    std::size_t feature = 0;
    double threshold = 0.0;
    double impurity_decrease = 0.0;
};

// Smallest impurity decrease treated as a real gain. Decreases below this are
// floating-point residue of an exact zero.
inline constexpr double kMinGain = 1e-12;

// Best axis-aligned split of the samples selected by `indices`. Candidate
// thresholds are midpoints between consecutive distinct values. Ties keep the
// lowest feature, then the lowest threshold. Returns nullopt when no candidate
// leaves min_samples_leaf on both sides with a positive decrease.
std::optional<SplitCandidate> best_split(std::span<const LabeledSample> samples,
                                         std::span<const std::size_t> indices, Criterion criterion,
                                         std::size_t min_samples_leaf);

std::optional<SplitCandidate> best_split(std::span<const LabeledSample> samples, Criterion criterion,
                                         std::size_t min_samples_leaf);

struct TrainingTrace {
    TreeModel model;
    std::vector<int> leaf_of_sample; // leaf id each training sample was assigned to
};

// Best-first growth under a leaf budget: the frontier leaf with the largest
// n * impurity_decrease is expanded next (ties: lowest node id) until the
// budget is reached or no leaf has an admissible split.
TreeModel train_tree(std::span<const LabeledSample> train, const TreeConfig& config);
TrainingTrace train_tree_traced(std::span<const LabeledSample> train, const TreeConfig& config);

} // namespace domepilot::dtree
