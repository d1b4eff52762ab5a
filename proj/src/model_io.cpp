#include "domepilot/model_io.hpp"

#include "domepilot/atomic_file.hpp"
#include "domepilot/errors.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace domepilot {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kFormatName = "domepilot-model";

json split_to_json(const SplitSpec& s) { return {{"test_fraction", s.test_fraction}, {"seed", s.seed}}; }

json tree_to_json(const dtree::TreeModel& m) {
    const auto& c = m.config();
    json nodes = json::array();
    for (std::size_t id = 0; id < m.nodes().size(); ++id) {
        const auto& n = m.nodes()[id];
        json j;
        j["id"] = id;
        if (n.is_leaf()) {
            j["kind"] = "leaf";
            j["class"] = n.label;
        } else {
            j["kind"] = "split";
            j["feature"] = n.feature;
            j["feature_name"] = std::string(kFeatureNames[static_cast<std::size_t>(n.feature)]);
            j["threshold"] = n.threshold;
            j["left"] = n.left;
            j["right"] = n.right;
        }
        j["impurity"] = n.impurity;
        j["n"] = n.n();
        j["counts"] = {n.counts[0], n.counts[1]};
        nodes.push_back(std::move(j));
    }
    json doc;
    doc["kind"] = "dt";
    doc["config"] = {{"criterion", std::string(dtree::to_string(c.criterion))},
                     {"max_leaf_nodes", c.max_leaf_nodes},
                     {"min_samples_leaf", c.min_samples_leaf},
                     {"seed", c.seed}};
    doc["nodes"] = std::move(nodes);
    return doc;
}

json knn_to_json(const knn::KnnModel& m) {
    json doc;
    doc["kind"] = "knn";
    doc["k"] = m.k();
    doc["scaling"] = std::string(knn::to_string(m.scaling()));
    if (m.scaling() == knn::Scaling::standardize) {
        doc["stats"] = {{"mean", m.scaler().mean}, {"stddev", m.scaler().stddev}};
    }
    json data = json::array();
    for (const auto& s : m.train()) {
        json row = json::array();
        for (double v : s.features) row.push_back(v);
        row.push_back(s.label);
        data.push_back(std::move(row));
    }
    doc["data"] = std::move(data);
    return doc;
}

template <typename T>
T get(const json& j, const char* key) {
    if (!j.contains(key)) throw ModelFormatError(std::string("model document is missing '") + key + "'");
    return j.at(key).get<T>();
}

dtree::TreeModel tree_from_json(const json& doc) {
    const auto& jc = doc.at("config");
    dtree::TreeConfig config;
    config.criterion = dtree::criterion_from_string(get<std::string>(jc, "criterion"));
    config.max_leaf_nodes = get<std::size_t>(jc, "max_leaf_nodes");
    config.min_samples_leaf = get<std::size_t>(jc, "min_samples_leaf");
    config.seed = get<std::uint64_t>(jc, "seed");

    const auto& jn = doc.at("nodes");
    if (!jn.is_array() || jn.empty()) throw ModelFormatError("tree model has no nodes");
    std::vector<dtree::Node> nodes(jn.size());
    std::vector<bool> seen(jn.size(), false);
    for (const auto& j : jn) {
        const auto id = get<std::size_t>(j, "id");
        if (id >= nodes.size() || seen[id]) throw ModelFormatError("tree model: bad or duplicate node id " + std::to_string(id));
        seen[id] = true;
        dtree::Node n;
        const auto counts = get<std::vector<std::size_t>>(j, "counts");
        if (counts.size() != 2) throw ModelFormatError("tree model: counts must have two entries");
        n.counts = {counts[0], counts[1]};
        n.impurity = get<double>(j, "impurity");
        const auto kind = get<std::string>(j, "kind");
        if (kind == "leaf") {
            n.label = get<int>(j, "class");
            if (n.label != 0 && n.label != 1) throw ModelFormatError("tree model: leaf class must be 0 or 1");
        } else if (kind == "split") {
            n.feature = get<int>(j, "feature");
            n.threshold = get<double>(j, "threshold");
            n.left = get<int>(j, "left");
            n.right = get<int>(j, "right");
            n.label = n.counts[1] > n.counts[0] ? 1 : 0;
        } else {
            throw ModelFormatError("tree model: unknown node kind '" + kind + "'");
        }
        nodes[id] = n;
    }
    try {
        return dtree::TreeModel(config, std::move(nodes));
    } catch (const InvalidArgument& e) {
        throw ModelFormatError(e.what());
    }
}

knn::KnnModel knn_from_json(const json& doc) {
    const auto k = get<std::size_t>(doc, "k");
    const auto scaling = knn::scaling_from_string(get<std::string>(doc, "scaling"));
    std::vector<LabeledSample> train;
    for (const auto& row : doc.at("data")) {
        if (!row.is_array() || row.size() != kFeatureCount + 1) {
            throw ModelFormatError("knn model: each data row needs " + std::to_string(kFeatureCount + 1) + " numbers");
        }
        LabeledSample s;
        for (std::size_t f = 0; f < kFeatureCount; ++f) s.features[f] = row[f].get<double>();
        s.label = row[kFeatureCount].get<int>();
        train.push_back(s);
    }
    knn::Scaler scaler;
    if (scaling == knn::Scaling::standardize) {
        const auto& st = doc.at("stats");
        scaler = knn::Scaler::from_stats(get<Features>(st, "mean"), get<Features>(st, "stddev"));
    }
    try {
        return knn::KnnModel(std::move(train), k, scaler);
    } catch (const InvalidArgument& e) {
        throw ModelFormatError(e.what());
    }
}

} // namespace

std::string_view model_kind(const AnyModel& model) noexcept {
    return std::holds_alternative<dtree::TreeModel>(model) ? "dt" : "knn";
}

Label predict(const AnyModel& model, std::span<const double> features) {
    return std::visit([&](const auto& m) { return m.predict(features); }, model);
}

std::string to_json(const StoredModel& stored) {
    json doc;
    doc["format"] = kFormatName;
    doc["version"] = kModelFormatVersion;
    const json body = std::visit(
        [](const auto& m) {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, dtree::TreeModel>) return tree_to_json(m);
            else return knn_to_json(m);
        },
        stored.model);
    for (const auto& [key, value] : body.items()) {
        if (key == "kind") doc[key] = value;
    }
    if (stored.split) doc["split"] = split_to_json(*stored.split);
    for (const auto& [key, value] : body.items()) {
        if (key != "kind") doc[key] = value;
    }
    return doc.dump(1) + "\n";
}

StoredModel from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ModelFormatError(std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        if (!doc.is_object() || doc.value("format", std::string{}) != kFormatName) {
            throw ModelFormatError("not a domepilot model document");
        }
        const auto version = get<int>(doc, "version");
        if (version != kModelFormatVersion) {
            throw ModelFormatError("unsupported model version " + std::to_string(version) + " (this build reads version " +
                                   std::to_string(kModelFormatVersion) + ")");
        }
        StoredModel out{dtree::TreeModel{}, std::nullopt};
        const auto kind = get<std::string>(doc, "kind");
        if (kind == "dt") out.model = tree_from_json(doc);
        else if (kind == "knn") out.model = knn_from_json(doc);
        else throw ModelFormatError("unknown model kind '" + kind + "'");
        if (doc.contains("split")) {
            const auto& s = doc.at("split");
            out.split = SplitSpec{get<double>(s, "test_fraction"), get<std::uint64_t>(s, "seed")};
        }
        return out;
    } catch (const json::exception& e) {
        throw ModelFormatError(std::string("malformed model document: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw ModelFormatError(std::string("malformed model document: ") + e.what());
    }
}

void save_model(const std::string& path, const StoredModel& stored) { write_file_atomic(path, to_json(stored)); }

StoredModel load_model(const std::string& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const Error& e) {
        throw ModelFormatError(e.what());
    }
    return from_json(text);
}

} // namespace domepilot
