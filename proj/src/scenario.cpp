#include "kgperf/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "kgperf/errors.hpp"
#include "kgperf/io.hpp"
#include "kgperf/metrics.hpp"
#include "kgperf/predict.hpp"

namespace kgperf {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::array<std::string_view, 7> kMetricNames = {
    "f1_solved",          "f1_not_solved", "f1_paper_compatible",
    "auc_roc",            "baseline_f1_paper_compatible",
    "baseline_auc",       "improvement_pct"};

std::array<double, 7> metric_values(const RunMetrics& m) {
  return {m.f1_solved,      m.f1_not_solved,
          m.f1_paper_compatible, m.auc_roc,
          m.baseline_f1_paper_compatible, m.baseline_auc,
          m.improvement_pct};
}

RunMetrics metrics_from_values(const std::array<double, 7>& v) {
  RunMetrics m;
  m.f1_solved = v[0];
  m.f1_not_solved = v[1];
  m.f1_paper_compatible = v[2];
  m.auc_roc = v[3];
  m.baseline_f1_paper_compatible = v[4];
  m.baseline_auc = v[5];
  m.improvement_pct = v[6];
  return m;
}

void aggregate(EvaluationReport& report) {
  std::array<double, 7> mean{}, sd{};
  for (std::size_t j = 0; j < 7; ++j) {
    double sum = 0;
    long n = 0;
    for (const auto& run : report.runs) {
      double v = metric_values(run)[j];
      if (std::isnan(v)) continue;
      sum += v;
      ++n;
    }
    if (n == 0) {
      mean[j] = kNaN;
      sd[j] = kNaN;
      continue;
    }
    mean[j] = sum / static_cast<double>(n);
    double var = 0;
    for (const auto& run : report.runs) {
      double v = metric_values(run)[j];
      if (std::isnan(v)) continue;
      var += (v - mean[j]) * (v - mean[j]);
    }
    sd[j] = std::sqrt(var / static_cast<double>(n));
  }
  report.mean = metrics_from_values(mean);
  report.stddev = metrics_from_values(sd);
}

/// Labels (1 = solved) of a triple list.
std::vector<char> solved_labels(std::span<const Triple> triples,
                                RelationId solved) {
  std::vector<char> out;
  out.reserve(triples.size());
  for (const auto& t : triples) out.push_back(t.rel == solved ? 1 : 0);
  return out;
}

RunMetrics evaluate_predictions(std::span<const char> test_solved,
                                std::span<const char> pred_solved,
                                std::span<const double> ranking_scores,
                                bool majority_is_solved) {
  RunMetrics m;
  std::vector<char> test_not(test_solved.size()), pred_not(pred_solved.size());
  for (std::size_t i = 0; i < test_solved.size(); ++i) {
    test_not[i] = test_solved[i] ? 0 : 1;
    pred_not[i] = pred_solved[i] ? 0 : 1;
  }
  m.f1_solved = f1_score(test_solved, pred_solved);
  m.f1_not_solved = f1_score(test_not, pred_not);
  m.f1_paper_compatible = majority_is_solved ? m.f1_solved : m.f1_not_solved;
  try {
    // Rank toward solved; flip labels when the positive class for AUC is
    // fixed as solved regardless of majority.
    m.auc_roc = auc_roc(test_solved, ranking_scores);
  } catch (const DataError&) {
    m.auc_roc = kNaN;
  }
  m.baseline_f1_paper_compatible =
      majority_baseline_f1(majority_is_solved, test_solved);
  m.baseline_auc = 0.5;
  m.improvement_pct =
      improvement_pct(m.f1_paper_compatible, m.baseline_f1_paper_compatible);
  return m;
}

}  // namespace

Scenario parse_scenario(std::string_view s) {
  if (s == "random_stratified") return Scenario::random_stratified;
  if (s == "leave_problem_instances_out")
    return Scenario::leave_problem_instances_out;
  if (s == "leave_algorithm_configs_out")
    return Scenario::leave_algorithm_configs_out;
  throw ConfigError("unknown scenario: " + std::string(s));
}

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::random_stratified: return "random_stratified";
    case Scenario::leave_problem_instances_out:
      return "leave_problem_instances_out";
    default: return "leave_algorithm_configs_out";
  }
}

Pipeline parse_pipeline(std::string_view s) {
  if (s == "score") return Pipeline::score;
  if (s == "rf") return Pipeline::rf;
  throw ConfigError("unknown pipeline: " + std::string(s));
}

std::string_view to_string(Pipeline p) {
  return p == Pipeline::score ? "score" : "rf";
}

ScenarioOutcome run_scenario_both(const KnowledgeGraph& kg, const Schema& schema,
                                  const ScenarioConfig& config,
                                  std::span<const ProblemKey> problem_keys) {
  if (config.repeats < 1) throw ConfigError("repeats must be positive");
  if (config.grid.empty()) throw ConfigError("empty hyperparameter grid");
  check_performance_exclusive(kg, schema);

  const std::vector<Triple> perf = performance_triples(kg, schema);
  if (perf.empty()) throw DataError("knowledge graph has no performance edges");
  std::vector<Triple> descriptive;
  for (const auto& t : kg.triples())
    if (!schema.is_performance(t.rel)) descriptive.push_back(t);

  int repeats = config.repeats;
  if (config.scenario == Scenario::leave_problem_instances_out)
    repeats = std::min(repeats, leave_instances_fold_count(problem_keys));

  ScenarioOutcome outcome;
  outcome.score.scenario = outcome.rf.scenario = config.scenario;
  outcome.score.pipeline = Pipeline::score;
  outcome.rf.pipeline = Pipeline::rf;

  for (int fold = 0; fold < repeats; ++fold) {
    std::uint64_t fold_seed = derive_seed(config.seed, fold);
    SplitTriples split;
    switch (config.scenario) {
      case Scenario::random_stratified:
        split = split_random_stratified(perf, schema.solved, schema.not_solved,
                                        fold_seed);
        break;
      case Scenario::leave_problem_instances_out:
        split = split_leave_instances_out(perf, problem_keys, fold);
        break;
      case Scenario::leave_algorithm_configs_out:
        split = split_leave_configs_out(perf, fold_seed);
        break;
    }
    if (split.train.empty() || split.val.empty() || split.test.empty())
      throw DataError("scenario split left a part empty; not enough data for " +
                      std::string(to_string(config.scenario)));

    TrainTask task;
    task.entity_labels = kg.entities().labels();
    task.relation_labels = kg.relation_names().labels();
    task.train_triples = descriptive;
    task.train_triples.insert(task.train_triples.end(), split.train.begin(),
                              split.train.end());
    task.val_triples = split.val;
    task.solved = schema.solved;
    task.not_solved = schema.not_solved;

    TrainConfig base = config.train;
    base.seed = derive_seed(fold_seed, fnv1a64("grid"));
    GridOutcome grid =
        grid_search(task, base, config.grid, config.threads);
    const ComplExModel& model = grid.best.model;

    const bool majority_is_solved =
        majority_performance_class(split.train, schema.solved,
                                   schema.not_solved) == schema.solved;
    std::vector<char> test_labels = solved_labels(split.test, schema.solved);

    // Score pipeline.
    {
      std::vector<char> preds(split.test.size());
      std::vector<double> margins(split.test.size());
      for (std::size_t i = 0; i < split.test.size(); ++i) {
        auto p = classify_by_score(model, split.test[i].head,
                                   split.test[i].tail, schema.solved,
                                   schema.not_solved);
        preds[i] = p.solved ? 1 : 0;
        margins[i] = p.margin;
      }
      outcome.score.runs.push_back(evaluate_predictions(
          test_labels, preds, margins, majority_is_solved));
    }

    // Forest on concatenated embeddings, trained on the fold's train edges.
    {
      std::vector<std::vector<double>> train_x;
      std::vector<char> train_y;
      train_x.reserve(split.train.size());
      for (const auto& t : split.train) {
        train_x.push_back(pair_features(model, t.head, t.tail));
        train_y.push_back(t.rel == schema.solved ? 1 : 0);
      }
      RFConfig rf_cfg;
      rf_cfg.n_trees = config.rf_trees;
      rf_cfg.seed = derive_seed(fold_seed, fnv1a64("rf"));
      RandomForest forest = RandomForest::fit(train_x, train_y, rf_cfg);

      std::vector<char> preds(split.test.size());
      std::vector<double> probas(split.test.size());
      for (std::size_t i = 0; i < split.test.size(); ++i) {
        auto x = pair_features(model, split.test[i].head, split.test[i].tail);
        preds[i] = forest.predict(x) ? 1 : 0;
        probas[i] = forest.predict_proba(x);
      }
      outcome.rf.runs.push_back(evaluate_predictions(
          test_labels, preds, probas, majority_is_solved));
    }
  }

  aggregate(outcome.score);
  aggregate(outcome.rf);
  return outcome;
}

EvaluationReport run_scenario(const KnowledgeGraph& kg, const Schema& schema,
                              const ScenarioConfig& config, Pipeline pipeline,
                              std::span<const ProblemKey> problem_keys) {
  ScenarioOutcome outcome = run_scenario_both(kg, schema, config, problem_keys);
  return pipeline == Pipeline::score ? outcome.score : outcome.rf;
}

std::string report_csv(const EvaluationReport& report) {
  std::string out = "scenario,fold,metric,value\n";
  auto emit = [&](const std::string& fold, const RunMetrics& m) {
    auto values = metric_values(m);
    for (std::size_t j = 0; j < kMetricNames.size(); ++j) {
      out += std::string(to_string(report.scenario));
      out += ',';
      out += fold;
      out += ',';
      out += kMetricNames[j];
      out += ',';
      out += io::format_double(values[j]);
      out += '\n';
    }
  };
  for (std::size_t f = 0; f < report.runs.size(); ++f)
    emit(std::to_string(f), report.runs[f]);
  emit("mean", report.mean);
  emit("stddev", report.stddev);
  return out;
}

std::string report_table(const EvaluationReport& report) {
  char buf[160];
  std::string out;
  std::snprintf(buf, sizeof(buf), "scenario %s, pipeline %s, %zu fold(s)\n",
                std::string(to_string(report.scenario)).c_str(),
                std::string(to_string(report.pipeline)).c_str(),
                report.runs.size());
  out += buf;
  std::snprintf(buf, sizeof(buf), "  %-30s %10s %10s\n", "metric", "mean",
                "stddev");
  out += buf;
  auto mean = metric_values(report.mean);
  auto sd = metric_values(report.stddev);
  for (std::size_t j = 0; j < kMetricNames.size(); ++j) {
    std::snprintf(buf, sizeof(buf), "  %-30s %10.4f %10.4f\n",
                  std::string(kMetricNames[j]).c_str(), mean[j], sd[j]);
    out += buf;
  }
  return out;
}

}  // namespace kgperf
