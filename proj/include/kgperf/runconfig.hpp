#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kgperf/ela.hpp"
#include "kgperf/embed.hpp"
#include "kgperf/train.hpp"

namespace kgperf {

/// Flat key=value run configuration. Defaults reproduce the standard study
/// setup (budgets, thresholds, hyperparameter grid); unknown keys are
/// rejected so typos cannot silently fall back to defaults.
struct RunConfig {
  int dimension = 5;
  std::vector<int> functions = {1, 2, 3, 4, 5, 6, 7};
  int instances = 5;
  std::vector<long> budgets = {2000, 5000, 10000, 50000};
  std::vector<double> thresholds = {1.0, 0.1, 0.001};
  int runs = 5;
  std::uint64_t seed = 1;
  int configs = 0;  // 0 = full enumeration, N = deterministic subsample
  unsigned threads = 1;

  double f0 = 0.5;
  double cr0 = 0.9;
  int pop_size = 0;  // 0 = 10 * dimension
  double pbest_rate = 0.1;

  ela::SampleStrategy sample_strategy = ela::SampleStrategy::halton;
  int sample_size = 0;  // 0 = 100 * dimension
  int sample_repetitions = 5;

  std::vector<int> grid_k = {50, 100, 150, 200};
  std::vector<double> grid_lr = {1e-3, 1e-4};
  std::vector<Loss> grid_loss = {Loss::pairwise, Loss::nll,
                                 Loss::self_adversarial};

  int max_epochs = 500;
  int patience = 10;
  int negatives_per_positive = 10;
  int batch_size = 512;
  double margin = 1.0;
  double adversarial_temperature = 1.0;
  double l2 = 0.0;

  int repeats = 5;
  int rf_trees = 10;
  std::string out_dir = ".";

  void validate() const;
  TrainConfig train_config() const;
};

RunConfig parse_run_config(const std::string& text, const std::string& where);
RunConfig load_run_config(const std::string& path);

}  // namespace kgperf
