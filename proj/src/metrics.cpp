#include "kgperf/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "kgperf/errors.hpp"

namespace kgperf {

Confusion confusion(std::span<const char> labels, std::span<const char> preds) {
  if (labels.size() != preds.size())
    throw DataError("confusion: length mismatch");
  Confusion c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (preds[i] && labels[i]) ++c.tp;
    else if (preds[i]) ++c.fp;
    else if (labels[i]) ++c.fn;
    else ++c.tn;
  }
  return c;
}

double f1_from_confusion(const Confusion& c) {
  long den = 2 * c.tp + c.fp + c.fn;
  return den == 0 ? 0.0
                  : 2.0 * static_cast<double>(c.tp) / static_cast<double>(den);
}

double f1_score(std::span<const char> labels, std::span<const char> preds) {
  return f1_from_confusion(confusion(labels, preds));
}

double auc_roc(std::span<const char> labels, std::span<const double> scores) {
  if (labels.size() != scores.size()) throw DataError("auc: length mismatch");
  long npos = 0;
  for (char l : labels) npos += l ? 1 : 0;
  long nneg = static_cast<long>(labels.size()) - npos;
  if (npos == 0 || nneg == 0)
    throw DataError("auc undefined: only one class present");

  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Average ranks across tie groups, then the rank-sum form of the U statistic.
  double pos_rank_sum = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t t = i; t < j; ++t)
      if (labels[order[t]]) pos_rank_sum += avg_rank;
    i = j;
  }
  double u = pos_rank_sum -
             static_cast<double>(npos) * (static_cast<double>(npos) + 1.0) / 2.0;
  return u / (static_cast<double>(npos) * static_cast<double>(nneg));
}

double majority_baseline_f1(bool majority_is_solved,
                            std::span<const char> test_solved) {
  // All predictions are the majority class and it is the positive class, so
  // TP = matches, FP = the rest, FN = 0.
  long tp = 0;
  for (char l : test_solved)
    if ((l != 0) == majority_is_solved) ++tp;
  long fp = static_cast<long>(test_solved.size()) - tp;
  Confusion c{tp, fp, 0, 0};
  return f1_from_confusion(c);
}

double improvement_pct(double f1, double baseline) {
  if (baseline == 0) return 0.0;
  return 100.0 * (f1 - baseline) / baseline;
}

}  // namespace kgperf
