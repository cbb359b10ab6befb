#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "kgperf/kg.hpp"
#include "kgperf/rng.hpp"

namespace kgperf {

enum class Loss { pairwise, nll, self_adversarial };

Loss parse_loss(std::string_view s);
std::string_view to_string(Loss loss);

/// Complex entity and relation embeddings, one row of 2k reals per id:
/// k real parts followed by k imaginary parts. Rows are indexed by the dense
/// handles of the graph the model was initialized from; labels make the
/// mapping portable across processes.
struct ComplExModel {
  int k = 0;
  Loss loss = Loss::pairwise;
  std::uint64_t seed = 0;
  std::vector<std::string> entity_labels;
  std::vector<std::string> relation_labels;
  std::vector<double> ent;  // entity_labels.size() * 2k
  std::vector<double> rel;  // relation_labels.size() * 2k

  std::size_t num_entities() const { return entity_labels.size(); }
  std::size_t num_relations() const { return relation_labels.size(); }

  std::span<double> entity_row(std::uint32_t id) {
    return {ent.data() + static_cast<std::size_t>(id) * 2 * k,
            static_cast<std::size_t>(2 * k)};
  }
  std::span<const double> entity_row(std::uint32_t id) const {
    return {ent.data() + static_cast<std::size_t>(id) * 2 * k,
            static_cast<std::size_t>(2 * k)};
  }
  std::span<double> relation_row(std::uint32_t id) {
    return {rel.data() + static_cast<std::size_t>(id) * 2 * k,
            static_cast<std::size_t>(2 * k)};
  }
  std::span<const double> relation_row(std::uint32_t id) const {
    return {rel.data() + static_cast<std::size_t>(id) * 2 * k,
            static_cast<std::size_t>(2 * k)};
  }

  double score(const Triple& t) const;
};

/// Xavier-uniform tables: every scalar from [-b, b] with b = sqrt(6 / (2k)).
ComplExModel init_model(int k, Loss loss, std::vector<std::string> entity_labels,
                        std::vector<std::string> relation_labels,
                        std::uint64_t seed);

// Text persistence: a tab-separated header line
// `complex-v1<TAB>k<TAB>|E|<TAB>|R|<TAB>loss<TAB>seed` followed by one
// `E<TAB>label<TAB>2k values` or `R<TAB>...` row per embedding. Values are
// shortest-round-trip decimals, so reload reproduces scores exactly.
void save_model(const std::string& path, const ComplExModel& model);
ComplExModel load_model(const std::string& path);

/// Per-table Adam accumulators. begin_step() advances the shared step count
/// once per batch; apply() then updates one row, so rows without gradient
/// this batch keep their stale moments untouched (sparse update).
class AdamState {
 public:
  AdamState(std::size_t size, double lr) : lr_(lr), m_(size, 0.0), v_(size, 0.0) {}

  void begin_step();
  void apply(std::span<double> params, std::span<const double> grad,
             std::size_t offset);

 private:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;
  double lr_;
  long step_ = 0;
  double corr1_ = 1, corr2_ = 1;
  std::vector<double> m_, v_;
};

/// Dense gradient arrays with touched-row bookkeeping so a batch only zeroes
/// and updates the rows it actually used.
struct GradientBuffer {
  GradientBuffer(std::size_t entities, std::size_t relations, int k);

  void reset();
  std::span<double> entity_grad(std::uint32_t id);
  std::span<double> relation_grad(std::uint32_t id);
  const std::vector<std::uint32_t>& touched_entities() const { return ent_rows_; }
  const std::vector<std::uint32_t>& touched_relations() const { return rel_rows_; }

 private:
  int k_;
  std::vector<double> ent_, rel_;
  std::vector<char> ent_touched_, rel_touched_;
  std::vector<std::uint32_t> ent_rows_, rel_rows_;
};

using TripleSet = std::unordered_set<Triple, TripleHash>;

/// Corrupts head or tail (fair coin) with a uniformly random other entity.
/// Candidates present in `known` are rejected and redrawn up to 100 times,
/// after which the last candidate is accepted as-is.
std::vector<Triple> sample_negatives(const Triple& pos, const TripleSet& known,
                                     std::uint32_t num_entities, int eta,
                                     Rng& rng);

struct LossConfig {
  Loss loss = Loss::pairwise;
  double margin = 1.0;
  double adv_alpha = 1.0;
  double l2 = 0.0;
};

struct TrainExample {
  Triple pos;
  std::vector<Triple> negs;
};

/// Total loss over the batch plus analytic gradients accumulated into `grad`
/// (touched rows only). With l2 > 0, each embedding row used by the batch
/// contributes l2 * ||row||^2 once, with the matching gradient.
double loss_and_grad(const ComplExModel& model, const LossConfig& config,
                     std::span<const TrainExample> batch, GradientBuffer& grad);

}  // namespace kgperf
