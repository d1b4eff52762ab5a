#include "domepilot/eval.hpp"

#include "domepilot/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace domepilot::eval {

ConfusionMatrix confusion(std::span<const Label> predictions, std::span<const Label> labels) {
    if (predictions.size() != labels.size()) {
        throw InvalidArgument("confusion: " + std::to_string(predictions.size()) + " predictions vs " +
                              std::to_string(labels.size()) + " labels");
    }
    if (predictions.empty()) throw InvalidArgument("confusion: no pairs to evaluate");
    ConfusionMatrix m;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const Label p = predictions[i];
        const Label y = labels[i];
        if ((p != 0 && p != 1) || (y != 0 && y != 1)) throw InvalidArgument("confusion: values must be 0 or 1");
        if (p == 1 && y == 1) ++m.tp;
        else if (p == 0 && y == 0) ++m.tn;
        else if (p == 1) ++m.fp;
        else ++m.fn;
    }
    return m;
}

double accuracy(const ConfusionMatrix& m) {
    if (m.total() == 0) throw InvalidArgument("accuracy: empty confusion matrix");
    return static_cast<double>(m.tp + m.tn) / static_cast<double>(m.total());
}

bool f1_degenerate(const ConfusionMatrix& m, Label positive_class) {
    const auto o = positive_class == 1 ? m : m.swapped();
    return o.tp + o.fp == 0 && o.tp + o.fn == 0;
}

double f1(const ConfusionMatrix& m, Label positive_class) {
    if (m.total() == 0) throw InvalidArgument("f1: empty confusion matrix");
    const auto o = positive_class == 1 ? m : m.swapped();
    // With tp = 0 precision and recall are both 0 or undefined.
    if (o.tp == 0) return 0.0;
    const double precision = static_cast<double>(o.tp) / static_cast<double>(o.tp + o.fp);
    const double recall = static_cast<double>(o.tp) / static_cast<double>(o.tp + o.fn);
    return 2.0 * precision * recall / (precision + recall);
}

double weighted_f1(const ConfusionMatrix& m) {
    if (m.total() == 0) throw InvalidArgument("weighted_f1: empty confusion matrix");
    const double support1 = static_cast<double>(m.tp + m.fn);
    const double support0 = static_cast<double>(m.tn + m.fp);
    return (support1 * f1(m, 1) + support0 * f1(m, 0)) / static_cast<double>(m.total());
}

double mse(std::span<const Label> predictions, std::span<const Label> labels) {
    if (predictions.size() != labels.size()) throw InvalidArgument("mse: length mismatch");
    if (predictions.empty()) throw InvalidArgument("mse: empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double d = static_cast<double>(predictions[i] - labels[i]);
        sum += d * d;
    }
    return sum / static_cast<double>(labels.size());
}

EvalReport evaluate(const PredictFn& predict, std::span<const LabeledSample> test, std::string model_id) {
    if (test.empty()) throw InvalidArgument("evaluate: empty test set");
    std::vector<Label> predictions;
    std::vector<Label> labels;
    predictions.reserve(test.size());
    labels.reserve(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
        try {
            predictions.push_back(predict(test[i].features));
        } catch (const std::exception& e) {
            throw Error("evaluate: prediction failed for test sample " + std::to_string(i) + ": " + e.what());
        }
        labels.push_back(test[i].label);
    }
    EvalReport r;
    r.model_id = std::move(model_id);
    r.matrix = confusion(predictions, labels);
    r.n_test = test.size();
    r.accuracy = accuracy(r.matrix);
    r.f1_class1 = f1(r.matrix, 1);
    r.f1_class0 = f1(r.matrix, 0);
    r.f1_class1_degenerate = f1_degenerate(r.matrix, 1);
    r.f1_class0_degenerate = f1_degenerate(r.matrix, 0);
    r.weighted_f1 = weighted_f1(r.matrix);
    r.mse = mse(predictions, labels);
    return r;
}

namespace {

std::string sig3(double v) {
    std::ostringstream os;
    os << std::setprecision(3) << v;
    return os.str();
}

} // namespace

void write_table(std::ostream& out, std::span<const EvalReport> reports) {
    std::size_t name_width = 5;
    for (const auto& r : reports) name_width = std::max(name_width, r.model_id.size());
    const auto w = static_cast<int>(name_width);
    out << std::left << std::setw(w) << "model" << std::right << std::setw(8) << "F1->1" << std::setw(8) << "F1->0"
        << std::setw(13) << "weighted F1" << std::setw(8) << "MSE" << std::setw(10) << "accuracy" << std::setw(8)
        << "n" << '\n';
    for (const auto& r : reports) {
        out << std::left << std::setw(w) << r.model_id << std::right << std::setw(8) << sig3(r.f1_class1)
            << std::setw(8) << sig3(r.f1_class0) << std::setw(13) << sig3(r.weighted_f1) << std::setw(8)
            << sig3(r.mse) << std::setw(10) << sig3(r.accuracy) << std::setw(8) << r.n_test << '\n';
    }
}

std::string to_json(const EvalReport& r) {
    nlohmann::ordered_json j;
    j["model_id"] = r.model_id;
    j["n_test"] = r.n_test;
    j["confusion"] = {{"tp", r.matrix.tp}, {"tn", r.matrix.tn}, {"fp", r.matrix.fp}, {"fn", r.matrix.fn}};
    j["f1_class1"] = r.f1_class1;
    j["f1_class0"] = r.f1_class0;
    j["weighted_f1"] = r.weighted_f1;
    j["mse"] = r.mse;
    j["accuracy"] = r.accuracy;
    j["f1_class1_degenerate"] = r.f1_class1_degenerate;
    j["f1_class0_degenerate"] = r.f1_class0_degenerate;
    return j.dump(2) + "\n";
}

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& m) {
    out << "actual,predicted,count\n"
        << "0,0," << m.tn << '\n'
        << "0,1," << m.fp << '\n'
        << "1,0," << m.fn << '\n'
        << "1,1," << m.tp << '\n';
}

} // namespace domepilot::eval
