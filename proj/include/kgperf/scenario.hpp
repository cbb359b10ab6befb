#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kgperf/kg.hpp"
#include "kgperf/splits.hpp"
#include "kgperf/train.hpp"

namespace kgperf {

enum class Scenario {
  random_stratified,
  leave_problem_instances_out,
  leave_algorithm_configs_out,
};

Scenario parse_scenario(std::string_view s);
std::string_view to_string(Scenario s);

enum class Pipeline { score, rf };

Pipeline parse_pipeline(std::string_view s);
std::string_view to_string(Pipeline p);

struct ScenarioConfig {
  Scenario scenario = Scenario::random_stratified;
  int repeats = 1;  // leave-instances: capped at the fold count
  std::uint64_t seed = 1;
  TrainConfig train;               // shared knobs; k/lr/loss come from the grid
  std::vector<GridPoint> grid;     // singleton = fixed hyperparameters
  unsigned threads = 1;
  int rf_trees = 10;
};

/// Metrics for one fold. Metrics whose preconditions fail (AUC on a
/// single-class test set) are NaN and excluded from aggregation.
struct RunMetrics {
  double f1_solved = 0;
  double f1_not_solved = 0;
  double f1_paper_compatible = 0;
  double auc_roc = 0;
  double baseline_f1_paper_compatible = 0;
  double baseline_auc = 0.5;
  double improvement_pct = 0;
};

struct EvaluationReport {
  Scenario scenario = Scenario::random_stratified;
  Pipeline pipeline = Pipeline::score;
  std::vector<RunMetrics> runs;
  RunMetrics mean;    // NaN-skipping arithmetic mean per metric
  RunMetrics stddev;  // population standard deviation, same skipping
};

/// Both pipelines evaluated on one shared embedding per fold: the embedding
/// is grid-searched (or fixed) once, then reused for score comparison and
/// for the forest on concatenated entity embeddings.
struct ScenarioOutcome {
  EvaluationReport score;
  EvaluationReport rf;
};

/// problem_keys are only consulted for leave_problem_instances_out and may
/// be empty otherwise.
ScenarioOutcome run_scenario_both(const KnowledgeGraph& kg, const Schema& schema,
                                  const ScenarioConfig& config,
                                  std::span<const ProblemKey> problem_keys);

EvaluationReport run_scenario(const KnowledgeGraph& kg, const Schema& schema,
                              const ScenarioConfig& config, Pipeline pipeline,
                              std::span<const ProblemKey> problem_keys);

// Report CSV: header `scenario,fold,metric,value`; folds are 0-based, the
// aggregate rows use `mean` and `stddev` in the fold column.
std::string report_csv(const EvaluationReport& report);

/// Fixed-width summary table for terminal output.
std::string report_table(const EvaluationReport& report);

}  // namespace kgperf
