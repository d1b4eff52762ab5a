#include "domepilot/dtree.hpp"

#include "domepilot/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

namespace domepilot::dtree {

std::string_view to_string(Criterion c) noexcept {
    return c == Criterion::gini ? "gini" : "entropy";
}

Criterion criterion_from_string(std::string_view s) {
    if (s == "gini") return Criterion::gini;
    if (s == "entropy") return Criterion::entropy;
    throw InvalidArgument("unknown criterion '" + std::string(s) + "' (expected gini or entropy)");
}

double impurity(const ClassCounts& counts, Criterion criterion) {
    const auto n = counts[0] + counts[1];
    if (n == 0) throw InvalidArgument("impurity: empty class counts");
    const double p0 = static_cast<double>(counts[0]) / static_cast<double>(n);
    const double p1 = static_cast<double>(counts[1]) / static_cast<double>(n);
    if (criterion == Criterion::gini) return 1.0 - p0 * p0 - p1 * p1;
    double h = 0.0;
    for (double p : {p0, p1}) {
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

namespace {

Label majority(const ClassCounts& c) { return c[1] > c[0] ? 1 : 0; }

ClassCounts count_labels(std::span<const LabeledSample> samples, std::span<const std::size_t> indices) {
    ClassCounts c{};
    for (auto i : indices) ++c[samples[i].label == 1 ? 1 : 0];
    return c;
}

// Relative slack under which two gains count as equal for tie-breaking.
constexpr double kTieSlack = 1e-12;

} // namespace

std::optional<SplitCandidate> best_split(std::span<const LabeledSample> samples,
                                         std::span<const std::size_t> indices, Criterion criterion,
                                         std::size_t min_samples_leaf) {
    const std::size_t n = indices.size();
    min_samples_leaf = std::max<std::size_t>(min_samples_leaf, 1);
    if (n < 2 || n < 2 * min_samples_leaf) return std::nullopt;

    const ClassCounts parent = count_labels(samples, indices);
    if (parent[0] == 0 || parent[1] == 0) return std::nullopt;
    const double parent_impurity = impurity(parent, criterion);
    const double dn = static_cast<double>(n);

    std::optional<SplitCandidate> best;
    std::vector<std::size_t> order(indices.begin(), indices.end());
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double va = samples[a].features[f];
            const double vb = samples[b].features[f];
            return va < vb || (va == vb && a < b);
        });
        ClassCounts left{};
        for (std::size_t pos = 0; pos + 1 < n; ++pos) {
            ++left[samples[order[pos]].label == 1 ? 1 : 0];
            const double lo = samples[order[pos]].features[f];
            const double hi = samples[order[pos + 1]].features[f];
            if (!(lo < hi)) continue;
            const std::size_t n_left = pos + 1;
            const std::size_t n_right = n - n_left;
            if (n_left < min_samples_leaf || n_right < min_samples_leaf) continue;
            const ClassCounts right{parent[0] - left[0], parent[1] - left[1]};
            const double gain = parent_impurity -
                                (static_cast<double>(n_left) / dn) * impurity(left, criterion) -
                                (static_cast<double>(n_right) / dn) * impurity(right, criterion);
            if (gain <= kMinGain) continue;
            if (best && gain <= best->impurity_decrease * (1.0 + kTieSlack)) continue;
            double threshold = lo + (hi - lo) / 2.0;
            if (threshold >= hi) threshold = lo; // adjacent doubles
            best = SplitCandidate{f, threshold, gain};
        }
    }
    return best;
}

std::optional<SplitCandidate> best_split(std::span<const LabeledSample> samples, Criterion criterion,
                                         std::size_t min_samples_leaf) {
    std::vector<std::size_t> all(samples.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return best_split(samples, all, criterion, min_samples_leaf);
}

TreeModel::TreeModel(TreeConfig config, std::vector<Node> nodes) : config_(config), nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw InvalidArgument("tree model: no nodes");
    std::vector<int> parents(nodes_.size(), 0);
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
        const auto& node = nodes_[id];
        if (node.is_leaf()) continue;
        if (node.feature < 0 || node.feature >= static_cast<int>(kFeatureCount)) {
            throw InvalidArgument("tree model: node " + std::to_string(id) + " has feature out of range");
        }
        for (int child : {node.left, node.right}) {
            if (child <= static_cast<int>(id) || child >= static_cast<int>(nodes_.size())) {
                throw InvalidArgument("tree model: node " + std::to_string(id) + " has invalid child");
            }
            ++parents[static_cast<std::size_t>(child)];
        }
    }
    if (parents[0] != 0) throw InvalidArgument("tree model: root has a parent");
    for (std::size_t id = 1; id < parents.size(); ++id) {
        if (parents[id] != 1) {
            throw InvalidArgument("tree model: node " + std::to_string(id) + " does not have exactly one parent");
        }
    }
}

int TreeModel::leaf_of(std::span<const double> features) const {
    if (features.size() != kFeatureCount) {
        throw InvalidArgument("tree predict: expected " + std::to_string(kFeatureCount) + " features, got " +
                              std::to_string(features.size()));
    }
    if (nodes_.empty()) throw InvalidArgument("tree predict: model is empty");
    int id = 0;
    while (!nodes_[static_cast<std::size_t>(id)].is_leaf()) {
        const auto& node = nodes_[static_cast<std::size_t>(id)];
        id = features[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
    }
    return id;
}

Label TreeModel::predict(std::span<const double> features) const {
    return nodes_[static_cast<std::size_t>(leaf_of(features))].label;
}

std::size_t TreeModel::leaf_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
}

TrainingTrace train_tree_traced(std::span<const LabeledSample> train, const TreeConfig& config) {
    if (train.empty()) throw InvalidArgument("train_tree: empty training set");
    if (config.max_leaf_nodes < 1) throw InvalidArgument("train_tree: max_leaf_nodes must be >= 1");
    if (config.min_samples_leaf < 1) throw InvalidArgument("train_tree: min_samples_leaf must be >= 1");
    for (const auto& s : train) {
        if (s.label != 0 && s.label != 1) throw InvalidArgument("train_tree: labels must be 0 or 1");
    }

    std::vector<Node> nodes;
    std::vector<std::vector<std::size_t>> members; // sample indices per node, only kept for open leaves

    auto make_node = [&](std::vector<std::size_t> idx) {
        Node node;
        node.counts = count_labels(train, idx);
        node.impurity = impurity(node.counts, config.criterion);
        node.label = majority(node.counts);
        nodes.push_back(node);
        members.push_back(std::move(idx));
        return static_cast<int>(nodes.size() - 1);
    };

    struct Pending {
        double priority;
        int node;
        SplitCandidate split;
    };
    auto worse = [](const Pending& a, const Pending& b) {
        return a.priority < b.priority || (a.priority == b.priority && a.node > b.node);
    };
    std::priority_queue<Pending, std::vector<Pending>, decltype(worse)> frontier(worse);

    auto consider = [&](int id) {
        const auto& idx = members[static_cast<std::size_t>(id)];
        if (auto cand = best_split(train, idx, config.criterion, config.min_samples_leaf)) {
            frontier.push({cand->impurity_decrease * static_cast<double>(idx.size()), id, *cand});
        }
    };

    std::vector<std::size_t> all(train.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    consider(make_node(std::move(all)));

    std::size_t leaves = 1;
    while (leaves < config.max_leaf_nodes && !frontier.empty()) {
        const Pending top = frontier.top();
        frontier.pop();
        auto idx = std::move(members[static_cast<std::size_t>(top.node)]);
        std::vector<std::size_t> left_idx;
        std::vector<std::size_t> right_idx;
        for (auto i : idx) {
            (train[i].features[top.split.feature] <= top.split.threshold ? left_idx : right_idx).push_back(i);
        }
        const int left = make_node(std::move(left_idx));
        const int right = make_node(std::move(right_idx));
        auto& parent = nodes[static_cast<std::size_t>(top.node)];
        parent.feature = static_cast<int>(top.split.feature);
        parent.threshold = top.split.threshold;
        parent.left = left;
        parent.right = right;
        ++leaves;
        consider(left);
        consider(right);
    }

    std::vector<int> leaf_of_sample(train.size(), Node::kNone);
    for (std::size_t id = 0; id < nodes.size(); ++id) {
        if (!nodes[id].is_leaf()) continue;
        for (auto i : members[id]) leaf_of_sample[i] = static_cast<int>(id);
    }
    return {TreeModel(config, std::move(nodes)), std::move(leaf_of_sample)};
}

TreeModel train_tree(std::span<const LabeledSample> train, const TreeConfig& config) {
    return train_tree_traced(train, config).model;
}

} // namespace domepilot::dtree
