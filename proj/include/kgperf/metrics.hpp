#pragma once

#include <span>

namespace kgperf {

struct Confusion {
  long tp = 0, fp = 0, fn = 0, tn = 0;
};

/// Labels and predictions are 1 for the positive class, 0 otherwise.
Confusion confusion(std::span<const char> labels, std::span<const char> preds);

/// 2TP / (2TP + FP + FN); the empty denominator maps to 0.
double f1_from_confusion(const Confusion& c);
double f1_score(std::span<const char> labels, std::span<const char> preds);

/// Probability that a random positive outranks a random negative, ties
/// counting one half (Mann-Whitney with average ranks). Throws DataError
/// when only one class is present.
double auc_roc(std::span<const char> labels, std::span<const double> scores);

/// F1 of the constant classifier that predicts the training-majority class,
/// evaluated with that same class as positive. Equals 2q/(1+q) for majority
/// prevalence q in the test labels.
double majority_baseline_f1(bool majority_is_solved,
                            std::span<const char> test_solved);

/// 100 * (f1 - baseline) / baseline; 0 when the baseline is 0.
double improvement_pct(double f1, double baseline);

}  // namespace kgperf
