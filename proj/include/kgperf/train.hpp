#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kgperf/embed.hpp"

namespace kgperf {

struct TrainConfig {
  int k = 100;
  double learning_rate = 1e-3;
  Loss loss = Loss::pairwise;
  int max_epochs = 500;
  int patience = 10;
  int negatives_per_positive = 10;
  int batch_size = 512;
  double margin = 1.0;
  double adv_alpha = 1.0;
  double l2 = 0.0;
  std::uint64_t seed = 1;

  void validate() const;
};

struct TrainCheck {
  int check_index = 0;  // 0-based
  int epoch = 0;        // 1-based
  double train_loss = 0;
  double val_f1 = 0;
};

struct TrainHistory {
  std::vector<TrainCheck> checks;
  int best_epoch = 0;      // epoch of the parameters the trainer returned
  double best_val_f1 = 0;  // maximum recorded check value, earliest on ties
  bool stopped_early = false;
};

/// Trainer input with ids resolved against one shared vocabulary. The label
/// lists cover the whole graph, so held-out entities still get embeddings;
/// only their performance edges are absent from train_triples.
struct TrainTask {
  std::vector<std::string> entity_labels;
  std::vector<std::string> relation_labels;
  std::vector<Triple> train_triples;  // descriptive + training performance
  std::vector<Triple> val_triples;    // performance edges, true relation kept
  RelationId solved = 0;
  RelationId not_solved = 0;
};

struct TrainResult {
  ComplExModel model;
  TrainHistory history;
};

/// Majority performance class among the given triples; ties and inputs with
/// no performance edges yield not_solved.
RelationId majority_performance_class(std::span<const Triple> triples,
                                      RelationId solved, RelationId not_solved);

/// Triple-classification F1 under score comparison: each (h, ?, t) is labeled
/// solved when score(h, solved, t) > score(h, not_solved, t), ties to
/// not_solved; F1 counts `positive` as the positive class, empty-denominator
/// convention 0.
double validation_f1(const ComplExModel& model, std::span<const Triple> val,
                     RelationId solved, RelationId not_solved,
                     RelationId positive);

/// Shuffled mini-batches with sparse Adam; one validation check per epoch;
/// stops after `patience` consecutive checks without strict improvement and
/// restores the best check's parameters. Deterministic given the config.
TrainResult train(const TrainTask& task, const TrainConfig& config);

// Training log CSV: header `check_index,epoch,train_loss,val_f1`.
void write_training_log(const std::string& path, const TrainHistory& history);

struct GridPoint {
  int k = 100;
  double learning_rate = 1e-3;
  Loss loss = Loss::pairwise;
};

/// Cartesian product in the given list order: k outermost, loss innermost.
std::vector<GridPoint> make_grid(const std::vector<int>& ks,
                                 const std::vector<double>& lrs,
                                 const std::vector<Loss>& losses);

struct GridEntry {
  GridPoint point;
  double val_f1 = 0;
  int best_epoch = 0;
};

struct GridOutcome {
  TrainResult best;
  GridPoint best_point;
  std::size_t best_index = 0;
  std::vector<GridEntry> table;  // one row per grid point, grid order
};

/// Trains every point with seed derived from (base.seed, point index), keeps
/// the best validation F1 (ties resolve to the earliest index, regardless of
/// completion order). Only the winning model is retained.
GridOutcome grid_search(const TrainTask& task, const TrainConfig& base,
                        std::span<const GridPoint> grid, unsigned threads);

// Grid table CSV: header `k,learning_rate,loss,val_f1,best_epoch`.
void write_grid_csv(const std::string& path, const GridOutcome& outcome);

}  // namespace kgperf
