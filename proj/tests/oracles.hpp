// Independent reference implementations used to cross-check the production
// code. Everything here is written the slow, obvious way on purpose.
#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <vector>

#include "kgperf/embed.hpp"

namespace oracles {

/// Triple score via std::complex arithmetic: Re(sum_j h_j * r_j * conj(t_j)).
inline double complex_score(const kgperf::ComplExModel& m,
                            const kgperf::Triple& t) {
  std::complex<double> acc = 0;
  auto h = m.entity_row(t.head);
  auto r = m.relation_row(t.rel);
  auto tl = m.entity_row(t.tail);
  const int k = m.k;
  for (int j = 0; j < k; ++j) {
    std::complex<double> hj(h[j], h[j + k]);
    std::complex<double> rj(r[j], r[j + k]);
    std::complex<double> tj(tl[j], tl[j + k]);
    acc += hj * rj * std::conj(tj);
  }
  return acc.real();
}

struct Confusion {
  long tp = 0, fp = 0, fn = 0, tn = 0;
};

/// Cell-by-cell confusion counting; labels/preds are 1 for the positive class.
inline Confusion count_confusion(const std::vector<char>& labels,
                                 const std::vector<char>& preds) {
  Confusion c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (preds[i] && labels[i]) ++c.tp;
    else if (preds[i] && !labels[i]) ++c.fp;
    else if (!preds[i] && labels[i]) ++c.fn;
    else ++c.tn;
  }
  return c;
}

inline double f1(const std::vector<char>& labels, const std::vector<char>& preds) {
  Confusion c = count_confusion(labels, preds);
  const double den = 2.0 * c.tp + c.fp + c.fn;
  return den == 0 ? 0.0 : 2.0 * c.tp / den;
}

/// AUC as the probability that a random positive outranks a random negative,
/// by exhaustive pair enumeration; ties count one half.
inline double pairwise_auc(const std::vector<char>& labels,
                           const std::vector<double>& scores) {
  double wins = 0;
  long pairs = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i]) continue;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (labels[j]) continue;
      ++pairs;
      if (scores[i] > scores[j]) wins += 1;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

/// Central finite difference of f at x along coordinate i.
template <typename F>
double central_diff(F&& f, std::vector<double>& x, std::size_t i, double h) {
  const double saved = x[i];
  x[i] = saved + h;
  const double up = f();
  x[i] = saved - h;
  const double down = f();
  x[i] = saved;
  return (up - down) / (2 * h);
}

}  // namespace oracles
