#pragma once

#include "domepilot/weather_data.hpp"

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace domepilot::eval {

// Binary confusion matrix with class 1 (open) as the positive class.
struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    std::size_t total() const noexcept { return tp + tn + fp + fn; }

    // Same counts seen with class 0 as positive.
    ConfusionMatrix swapped() const noexcept { return {tn, tp, fn, fp}; }

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

// Throws InvalidArgument on empty or mismatched inputs, or values outside {0,1}.
ConfusionMatrix confusion(std::span<const Label> predictions, std::span<const Label> labels);

double accuracy(const ConfusionMatrix& m);

// F1 for `positive_class`; 0 when precision + recall is 0.
double f1(const ConfusionMatrix& m, Label positive_class);

// True when F1 for the class is undefined (no predicted and no actual members)
// and was reported as 0.
bool f1_degenerate(const ConfusionMatrix& m, Label positive_class);

// Per-class F1 weighted by true-label support.
double weighted_f1(const ConfusionMatrix& m);

double mse(std::span<const Label> predictions, std::span<const Label> labels);

struct EvalReport {
    std::string model_id;
    ConfusionMatrix matrix;
    std::size_t n_test = 0;
    double accuracy = 0.0;
    double f1_class1 = 0.0;
    double f1_class0 = 0.0;
    double weighted_f1 = 0.0;
    double mse = 0.0;
    bool f1_class1_degenerate = false;
    bool f1_class0_degenerate = false;
};

using PredictFn = std::function<Label(const Features&)>;

// Runs `predict` over every test sample and assembles the metrics.
// Prediction errors are rethrown with the offending sample index.
EvalReport evaluate(const PredictFn& predict, std::span<const LabeledSample> test, std::string model_id = {});

// Columns:
// F1->1, F1->0, weighted F1, MSE, accuracy.
void write_table(std::ostream& out, std::span<const EvalReport> reports);
std::string to_json(const EvalReport& report);
// actual,predicted,count rows for plotting.
void write_confusion_csv(std::ostream& out, const ConfusionMatrix& m);

} // namespace domepilot::eval
