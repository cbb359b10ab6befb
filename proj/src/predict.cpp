#include "kgperf/predict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kgperf/errors.hpp"
#include "kgperf/rng.hpp"

namespace kgperf {

ModelIndex::ModelIndex(const ComplExModel& model) {
  for (std::uint32_t i = 0; i < model.entity_labels.size(); ++i)
    entities_.emplace(model.entity_labels[i], i);
  for (std::uint32_t i = 0; i < model.relation_labels.size(); ++i)
    relations_.emplace(model.relation_labels[i], i);
}

std::uint32_t ModelIndex::entity(std::string_view label) const {
  auto it = entities_.find(label);
  if (it == entities_.end())
    throw DataError("unknown entity: " + std::string(label));
  return it->second;
}

std::uint32_t ModelIndex::relation(std::string_view label) const {
  auto it = relations_.find(label);
  if (it == relations_.end())
    throw DataError("unknown relation: " + std::string(label));
  return it->second;
}

ScorePrediction classify_by_score(const ComplExModel& model, EntityId algorithm,
                                  EntityId problem, RelationId solved,
                                  RelationId not_solved) {
  double ss = model.score({algorithm, solved, problem});
  double sn = model.score({algorithm, not_solved, problem});
  return {ss > sn, ss - sn};
}

std::vector<double> pair_features(const ComplExModel& model, EntityId algorithm,
                                  EntityId problem) {
  auto a = model.entity_row(algorithm);
  auto p = model.entity_row(problem);
  std::vector<double> out;
  out.reserve(a.size() + p.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), p.begin(), p.end());
  return out;
}

double gini(long n_solved, long n_total) {
  if (n_total == 0) return 0.0;
  double p = static_cast<double>(n_solved) / static_cast<double>(n_total);
  return 2.0 * p * (1.0 - p);
}

namespace {

double x_at(const std::vector<std::vector<double>>& features, std::uint32_t row,
            int col) {
  return features[row][col];
}

}  // namespace

RandomForest RandomForest::fit(const std::vector<std::vector<double>>& features,
                               const std::vector<char>& labels,
                               const RFConfig& config) {
  if (features.empty()) throw DataError("random forest: empty training set");
  if (features.size() != labels.size())
    throw DataError("random forest: feature/label count mismatch");
  if (config.n_trees < 1) throw ConfigError("n_trees must be positive");
  const int dim = static_cast<int>(features.front().size());
  if (dim < 1) throw DataError("random forest: zero-width features");
  for (const auto& row : features)
    if (static_cast<int>(row.size()) != dim)
      throw DataError("random forest: ragged feature rows");

  int max_features = config.max_features > 0
                         ? config.max_features
                         : std::max(1, static_cast<int>(std::sqrt(
                                           static_cast<double>(dim))));
  max_features = std::min(max_features, dim);

  RandomForest forest;
  forest.feature_dim_ = dim;
  forest.trees_.resize(config.n_trees);
  const std::size_t n = features.size();

  for (int t = 0; t < config.n_trees; ++t) {
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(t)));
    std::vector<std::uint32_t> sample(n);
    if (config.bootstrap) {
      for (auto& s : sample)
        s = static_cast<std::uint32_t>(rng.uniform_index(n));
    } else {
      for (std::size_t i = 0; i < n; ++i) sample[i] = static_cast<std::uint32_t>(i);
    }

    Tree& tree = forest.trees_[t];
    std::vector<int> perm(dim);

    // Recursive CART growth over an index range of `sample`.
    auto grow = [&](auto&& self, std::size_t lo, std::size_t hi) -> int {
      long total = static_cast<long>(hi - lo);
      long solved = 0;
      for (std::size_t i = lo; i < hi; ++i) solved += labels[sample[i]] ? 1 : 0;

      Node node;
      node.n_solved = solved;
      node.n_total = total;
      int node_id = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back(node);

      if (total < 2 || solved == 0 || solved == total) return node_id;

      // Feature draw order: a fresh random permutation per node; the first
      // max_features entries are the regular candidates, the rest are the
      // fallback for when no candidate admits a valid split.
      for (int f = 0; f < dim; ++f) perm[f] = f;
      for (int f = dim; f > 1; --f) {
        int j = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(f)));
        std::swap(perm[f - 1], perm[j]);
      }

      int best_feature = -1;
      double best_threshold = 0;
      double best_impurity = std::numeric_limits<double>::infinity();
      std::vector<std::uint32_t> idx(sample.begin() + lo, sample.begin() + hi);

      for (int fpos = 0; fpos < dim; ++fpos) {
        if (fpos >= max_features && best_feature >= 0) break;
        int f = perm[fpos];
        std::stable_sort(idx.begin(), idx.end(), [&](std::uint32_t a,
                                                     std::uint32_t b) {
          return x_at(features, a, f) < x_at(features, b, f);
        });
        long left_solved = 0;
        for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
          left_solved += labels[idx[i]] ? 1 : 0;
          double cur = x_at(features, idx[i], f);
          double nxt = x_at(features, idx[i + 1], f);
          if (cur == nxt) continue;
          long nl = static_cast<long>(i) + 1;
          long nr = total - nl;
          double imp = (static_cast<double>(nl) * gini(left_solved, nl) +
                        static_cast<double>(nr) * gini(solved - left_solved, nr)) /
                       static_cast<double>(total);
          if (imp < best_impurity) {
            best_impurity = imp;
            best_feature = f;
            // Midpoint, but never rounding up to `nxt`: both children must
            // stay nonempty or the recursion would not terminate.
            double mid_val = cur + 0.5 * (nxt - cur);
            best_threshold = mid_val < nxt ? mid_val : cur;
          }
        }
      }

      if (best_feature < 0) return node_id;  // all candidate features constant

      // Partition the range in place, preserving relative order.
      std::stable_partition(sample.begin() + lo, sample.begin() + hi,
                            [&](std::uint32_t a) {
                              return x_at(features, a, best_feature) <=
                                     best_threshold;
                            });
      std::size_t mid = lo;
      while (mid < hi &&
             x_at(features, sample[mid], best_feature) <= best_threshold)
        ++mid;

      tree.nodes[node_id].feature = best_feature;
      tree.nodes[node_id].threshold = best_threshold;
      int left = self(self, lo, mid);
      tree.nodes[node_id].left = left;
      int right = self(self, mid, hi);
      tree.nodes[node_id].right = right;
      return node_id;
    };
    grow(grow, 0, n);
  }
  return forest;
}

const RandomForest::Node& RandomForest::leaf_for(
    const Tree& tree, std::span<const double> x) const {
  int at = 0;
  while (tree.nodes[at].feature >= 0) {
    const Node& node = tree.nodes[at];
    at = x[node.feature] <= node.threshold ? node.left : node.right;
  }
  return tree.nodes[at];
}

bool RandomForest::predict(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != feature_dim_)
    throw DataError("random forest: feature dimension mismatch");
  long votes = 0;
  for (const auto& tree : trees_) {
    const Node& leaf = leaf_for(tree, x);
    if (2 * leaf.n_solved > leaf.n_total) ++votes;
  }
  return 2 * votes > static_cast<long>(trees_.size());
}

double RandomForest::predict_proba(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != feature_dim_)
    throw DataError("random forest: feature dimension mismatch");
  double sum = 0;
  for (const auto& tree : trees_) {
    const Node& leaf = leaf_for(tree, x);
    sum += static_cast<double>(leaf.n_solved) / static_cast<double>(leaf.n_total);
  }
  return sum / static_cast<double>(trees_.size());
}

std::vector<char> RandomForest::tree_votes(std::span<const double> x) const {
  std::vector<char> votes;
  votes.reserve(trees_.size());
  for (const auto& tree : trees_) {
    const Node& leaf = leaf_for(tree, x);
    votes.push_back(2 * leaf.n_solved > leaf.n_total ? 1 : 0);
  }
  return votes;
}

}  // namespace kgperf
