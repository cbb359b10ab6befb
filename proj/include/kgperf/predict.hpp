#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "kgperf/embed.hpp"

namespace kgperf {

/// Label -> row id lookup built once over a model's labels.
class ModelIndex {
 public:
  explicit ModelIndex(const ComplExModel& model);

  /// Throw DataError for labels the model does not cover.
  std::uint32_t entity(std::string_view label) const;
  std::uint32_t relation(std::string_view label) const;

 private:
  std::unordered_map<std::string, std::uint32_t, TransparentHash, TransparentEq>
      entities_, relations_;
};

struct ScorePrediction {
  bool solved = false;
  double margin = 0;  // score(a, solved, p) - score(a, not_solved, p)
};

/// solved iff the solved-relation score is strictly larger; exact ties are
/// not_solved. The margin doubles as the ranking score for AUC.
ScorePrediction classify_by_score(const ComplExModel& model, EntityId algorithm,
                                  EntityId problem, RelationId solved,
                                  RelationId not_solved);

/// [Re(a) | Im(a) | Re(p) | Im(p)], length 4k.
std::vector<double> pair_features(const ComplExModel& model, EntityId algorithm,
                                  EntityId problem);

struct RFConfig {
  int n_trees = 10;
  bool bootstrap = true;
  int max_features = 0;  // 0 means floor(sqrt(feature count)), at least 1
  std::uint64_t seed = 1;
};

/// Axis-aligned CART forest, Gini impurity, grown to purity
/// (min_samples_split = 2, min_samples_leaf = 1, no depth limit). At each
/// node max_features candidate features are tried first; if none admits a
/// valid split the remaining features are tried too, so a consistent dataset
/// always splits. Diagnostic mode (1 tree, bootstrap off) therefore fits the
/// training data exactly.
class RandomForest {
 public:
  static RandomForest fit(const std::vector<std::vector<double>>& features,
                          const std::vector<char>& labels,  // 1 = solved
                          const RFConfig& config);

  /// Hard majority vote over trees; exact ties vote not_solved.
  bool predict(std::span<const double> x) const;
  /// Mean over trees of the reached leaf's solved fraction.
  double predict_proba(std::span<const double> x) const;

  /// Per-tree votes, for cross-checking the aggregate rules.
  std::vector<char> tree_votes(std::span<const double> x) const;

  int num_trees() const { return static_cast<int>(trees_.size()); }

 private:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0;
    int left = -1, right = -1;
    long n_solved = 0, n_total = 0;
  };
  struct Tree {
    std::vector<Node> nodes;
  };

  int feature_dim_ = 0;
  std::vector<Tree> trees_;

  const Node& leaf_for(const Tree& tree, std::span<const double> x) const;
};

/// Gini impurity of a two-class count pair.
double gini(long n_solved, long n_total);

}  // namespace kgperf
