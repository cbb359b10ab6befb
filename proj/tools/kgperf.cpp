// Command-line front end for the benchmark -> knowledge-graph -> embedding ->
// evaluation pipeline. Subcommands mirror the pipeline stages; every stage
// reads and writes the documented text formats, so stages can be rerun or
// substituted independently.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "kgperf/ela.hpp"
#include "kgperf/embed.hpp"
#include "kgperf/errors.hpp"
#include "kgperf/io.hpp"
#include "kgperf/kg.hpp"
#include "kgperf/metrics.hpp"
#include "kgperf/modde.hpp"
#include "kgperf/parallel.hpp"
#include "kgperf/predict.hpp"
#include "kgperf/problems.hpp"
#include "kgperf/records.hpp"
#include "kgperf/runconfig.hpp"
#include "kgperf/scenario.hpp"
#include "kgperf/splits.hpp"
#include "kgperf/train.hpp"

namespace fs = std::filesystem;
using namespace kgperf;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_override;
};

RunConfig load_config(const CommonArgs& args) {
  RunConfig cfg = load_run_config(args.config_path);
  if (!args.out_override.empty()) cfg.out_dir = args.out_override;
  fs::create_directories(cfg.out_dir);
  return cfg;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out_dir) / name).string();
}

/// Deterministic evenly spaced subsample of the enumerated configurations.
std::vector<ConfigRecord> subsample_configs(std::vector<ConfigRecord> all,
                                            int want) {
  if (want <= 0 || want >= static_cast<int>(all.size())) return all;
  std::vector<ConfigRecord> out;
  out.reserve(want);
  for (int j = 0; j < want; ++j)
    out.push_back(all[static_cast<std::size_t>(j) * all.size() / want]);
  return out;
}

std::vector<ModdeConfig> parse_all(const std::vector<ConfigRecord>& records,
                                   const RunConfig& cfg) {
  std::vector<ModdeConfig> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    ModdeConfig c = ModdeConfig::from_record(r);
    c.f0 = cfg.f0;
    c.cr0 = cfg.cr0;
    c.pop0 = cfg.pop_size;
    c.pbest_rate = cfg.pbest_rate;
    out.push_back(c);
  }
  return out;
}

int cmd_datagen(const CommonArgs& args, int configs_override) {
  RunConfig cfg = load_config(args);
  if (configs_override >= 0) cfg.configs = configs_override;

  auto records = subsample_configs(
      enumerate_configs("modDE", modde_module_space()), cfg.configs);
  auto parsed = parse_all(records, cfg);
  auto problems = make_problem_set(cfg.functions, cfg.instances, cfg.dimension);

  auto perf = collect_performance(records, parsed, problems, cfg.budgets,
                                  cfg.runs, cfg.seed, cfg.threads);

  write_config_tsv(out_path(cfg, "configs.tsv"), records);
  std::vector<ProblemRecord> problem_records;
  problem_records.reserve(problems.size());
  for (const auto& p : problems) problem_records.push_back(p.record());
  write_problems_csv(out_path(cfg, "problems.csv"), problem_records);
  write_performance_csv(out_path(cfg, "performance.csv"), perf);

  std::cout << "datagen: " << records.size() << " configs x " << problems.size()
            << " problems, " << perf.size() << " performance records\n";
  return 0;
}

int cmd_ela(const CommonArgs& args) {
  RunConfig cfg = load_config(args);
  auto problems = make_problem_set(cfg.functions, cfg.instances, cfg.dimension);

  ela::SampleDesign design;
  design.strategy = cfg.sample_strategy;
  design.sample_size = cfg.sample_size;
  design.repetitions = cfg.sample_repetitions;

  std::vector<std::string> ids(problems.size());
  std::vector<ela::FeatureVector> medians(problems.size());
  parallel_for(problems.size(), cfg.threads, [&](std::size_t i) {
    const Problem& p = problems[i];
    ids[i] = p.record().id;
    ela::SampleDesign d = design;
    d.seed = derive_seed(cfg.seed, fnv1a64(p.record().id));
    std::vector<ela::FeatureVector> reps;
    reps.reserve(d.repetitions);
    for (int r = 0; r < d.repetitions; ++r) {
      auto sample = ela::sample_points(
          d, p.dimension(), [&](std::span<const double> x) { return p.evaluate(x); },
          r);
      reps.push_back(ela::compute_features(sample));
    }
    medians[i] = ela::median_features(reps);
  });

  ela::write_features_csv(out_path(cfg, "features.csv"),
                          ela::make_raw_table(ids, medians));
  std::cout << "ela: " << problems.size() << " problems, "
            << ela::FeatureVector::kCount << " features each\n";
  return 0;
}

int cmd_build(const CommonArgs& args, std::string perf_path,
              std::string configs_path, std::string problems_path,
              std::string features_path) {
  RunConfig cfg = load_config(args);
  if (perf_path.empty()) perf_path = out_path(cfg, "performance.csv");
  if (configs_path.empty()) configs_path = out_path(cfg, "configs.tsv");
  if (problems_path.empty()) problems_path = out_path(cfg, "problems.csv");
  if (features_path.empty()) features_path = out_path(cfg, "features.csv");

  auto configs = read_config_tsv(configs_path);
  auto problems = read_problems_csv(problems_path);
  auto features = ela::bin_features(ela::read_features_csv(features_path));
  auto perf = read_performance_csv(perf_path);

  bool first = true;
  for (long budget : cfg.budgets) {
    for (double threshold : cfg.thresholds) {
      KnowledgeGraph kg =
          build_kg(configs, problems, features, perf, budget, threshold);
      std::string name = "kg_D" + std::to_string(cfg.dimension) + "_B" +
                         std::to_string(budget) + "_T" +
                         io::format_double(threshold) + ".tsv";
      write_kg(out_path(cfg, name), kg);
      if (first) {
        io::write_file(out_path(cfg, "vocabulary.tsv"),
                       serialize_vocabulary(kg));
        first = false;
      }
      std::cout << "build: " << name << " (" << kg.triples().size()
                << " triples)\n";
    }
  }
  return 0;
}

/// Shared assembly for train/gridsearch: stratified split against the KG.
struct TrainSetup {
  KnowledgeGraph kg;
  Schema schema;
  TrainTask task;
  SplitTriples split;
};

TrainSetup make_train_setup(const std::string& kg_path, std::uint64_t seed) {
  TrainSetup s{read_kg(kg_path), {}, {}, {}};
  s.schema = Schema::resolve(s.kg);
  check_performance_exclusive(s.kg, s.schema);
  auto perf = performance_triples(s.kg, s.schema);
  if (perf.empty()) throw DataError(kg_path + ": no performance edges");
  s.split = split_random_stratified(perf, s.schema.solved, s.schema.not_solved,
                                    seed);
  s.task.entity_labels = s.kg.entities().labels();
  s.task.relation_labels = s.kg.relation_names().labels();
  for (const auto& t : s.kg.triples())
    if (!s.schema.is_performance(t.rel)) s.task.train_triples.push_back(t);
  s.task.train_triples.insert(s.task.train_triples.end(),
                              s.split.train.begin(), s.split.train.end());
  s.task.val_triples = s.split.val;
  s.task.solved = s.schema.solved;
  s.task.not_solved = s.schema.not_solved;
  return s;
}

int cmd_train(const CommonArgs& args, const std::string& kg_path, int k,
              double lr, const std::string& loss_name) {
  RunConfig cfg = load_config(args);
  TrainSetup setup = make_train_setup(kg_path, cfg.seed);

  TrainConfig tc = cfg.train_config();
  if (k > 0) tc.k = k;
  if (lr > 0) tc.learning_rate = lr;
  if (!loss_name.empty()) tc.loss = parse_loss(loss_name);

  TrainResult result = train(setup.task, tc);
  save_model(out_path(cfg, "model.tsv"), result.model);
  write_training_log(out_path(cfg, "training_log.csv"), result.history);
  std::cout << "train: best epoch " << result.history.best_epoch << ", val F1 "
            << io::format_double(result.history.best_val_f1) << "\n";
  return 0;
}

int cmd_gridsearch(const CommonArgs& args, const std::string& kg_path) {
  RunConfig cfg = load_config(args);
  TrainSetup setup = make_train_setup(kg_path, cfg.seed);

  auto grid = make_grid(cfg.grid_k, cfg.grid_lr, cfg.grid_loss);
  GridOutcome outcome =
      grid_search(setup.task, cfg.train_config(), grid, cfg.threads);

  save_model(out_path(cfg, "model.tsv"), outcome.best.model);
  write_training_log(out_path(cfg, "training_log.csv"), outcome.best.history);
  write_grid_csv(out_path(cfg, "grid_results.csv"), outcome);
  std::cout << "gridsearch: " << grid.size() << " points, best k="
            << outcome.best_point.k << " lr="
            << io::format_double(outcome.best_point.learning_rate) << " loss="
            << to_string(outcome.best_point.loss) << " val F1 "
            << io::format_double(outcome.best.history.best_val_f1) << "\n";
  return 0;
}

std::vector<ProblemKey> problem_keys_from_csv(const KnowledgeGraph& kg,
                                              const std::string& problems_path) {
  std::vector<ProblemKey> keys;
  for (const auto& rec : read_problems_csv(problems_path)) {
    auto id = kg.entities().find(rec.id);
    if (!id) continue;  // problems absent from this KG don't bear edges
    keys.push_back({*id, rec.function, rec.instance_index});
  }
  return keys;
}

int cmd_eval(const CommonArgs& args, const std::string& kg_path,
             const std::string& scenario_name, const std::string& pipeline_name,
             int repeats, const std::string& problems_path) {
  RunConfig cfg = load_config(args);
  Scenario scenario = parse_scenario(scenario_name);

  ScenarioConfig sc;
  sc.scenario = scenario;
  sc.repeats = repeats > 0 ? repeats
               : scenario == Scenario::random_stratified ? 1
                                                         : cfg.repeats;
  sc.seed = cfg.seed;
  sc.train = cfg.train_config();
  sc.grid = make_grid(cfg.grid_k, cfg.grid_lr, cfg.grid_loss);
  sc.threads = cfg.threads;
  sc.rf_trees = cfg.rf_trees;

  KnowledgeGraph kg = read_kg(kg_path);
  Schema schema = Schema::resolve(kg);
  std::vector<ProblemKey> keys;
  if (scenario == Scenario::leave_problem_instances_out) {
    std::string path = problems_path.empty() ? out_path(cfg, "problems.csv")
                                             : problems_path;
    keys = problem_keys_from_csv(kg, path);
  }

  auto emit = [&](const EvaluationReport& report) {
    std::string name = "report_" + std::string(to_string(report.scenario)) +
                       "_" + std::string(to_string(report.pipeline)) + ".csv";
    io::write_file(out_path(cfg, name), report_csv(report));
    std::cout << report_table(report);
  };

  if (pipeline_name == "both") {
    ScenarioOutcome outcome = run_scenario_both(kg, schema, sc, keys);
    emit(outcome.score);
    emit(outcome.rf);
  } else {
    emit(run_scenario(kg, schema, sc, parse_pipeline(pipeline_name), keys));
  }
  return 0;
}

int cmd_predict(const std::string& model_path, const std::string& kg_path,
                const std::string& pairs_path, const std::string& pipeline_name,
                const std::string& out_file, std::uint64_t seed) {
  ComplExModel model = load_model(model_path);
  ModelIndex index(model);
  RelationId solved = index.relation("solved");
  RelationId not_solved = index.relation("not_solved");

  struct Pair {
    std::string config_id, problem_id;
    EntityId a, p;
  };
  std::vector<Pair> pairs;
  {
    const std::string text = io::read_file(pairs_path);
    auto lines = io::split_lines(text);
    if (lines.empty() || lines[0] != "config_id,problem_id")
      throw DataError(pairs_path + ": bad pairs header");
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
      auto fields = io::split(lines[ln], ',');
      std::string ctx = pairs_path + " line " + std::to_string(ln + 1);
      if (fields.size() != 2) throw DataError(ctx + ": expected 2 fields");
      Pair p;
      p.config_id = std::string(fields[0]);
      p.problem_id = std::string(fields[1]);
      p.a = index.entity(p.config_id);
      p.p = index.entity(p.problem_id);
      pairs.push_back(std::move(p));
    }
  }

  std::string out = "config_id,problem_id,predicted_label,score_or_proba\n";
  Pipeline pipeline = parse_pipeline(pipeline_name);
  if (pipeline == Pipeline::score) {
    for (const auto& p : pairs) {
      auto pred = classify_by_score(model, p.a, p.p, solved, not_solved);
      out += p.config_id + "," + p.problem_id + "," +
             (pred.solved ? "solved" : "not_solved") + "," +
             io::format_double(pred.margin) + "\n";
    }
  } else {
    if (kg_path.empty())
      throw ConfigError("predict --pipeline rf needs --kg for forest training");
    KnowledgeGraph kg = read_kg(kg_path);
    Schema schema = Schema::resolve(kg);
    std::vector<std::vector<double>> train_x;
    std::vector<char> train_y;
    for (const auto& t : performance_triples(kg, schema)) {
      EntityId a = index.entity(kg.entities().label(t.head));
      EntityId pr = index.entity(kg.entities().label(t.tail));
      train_x.push_back(pair_features(model, a, pr));
      train_y.push_back(t.rel == schema.solved ? 1 : 0);
    }
    RFConfig rf_cfg;
    rf_cfg.seed = seed;
    RandomForest forest = RandomForest::fit(train_x, train_y, rf_cfg);
    for (const auto& p : pairs) {
      auto x = pair_features(model, p.a, p.p);
      bool label = forest.predict(x);
      out += p.config_id + "," + p.problem_id + "," +
             (label ? "solved" : "not_solved") + "," +
             io::format_double(forest.predict_proba(x)) + "\n";
    }
  }
  io::write_file(out_file, out);
  std::cout << "predict: " << pairs.size() << " pairs -> " << out_file << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"benchmark performance knowledge graphs: data generation, "
               "embedding training, and evaluation"};
  app.require_subcommand(1);

  CommonArgs common;
  int configs_override = -1;
  std::string kg_path, scenario_name = "random_stratified";
  std::string pipeline_name = "both";
  int repeats = 0;
  std::string perf_path, configs_path, problems_path, features_path;
  std::string model_path, pairs_path, out_file = "predictions.csv";
  int k_override = 0;
  double lr_override = 0;
  std::string loss_override;
  std::uint64_t predict_seed = 1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", common.config_path, "run configuration file")
        ->required();
    cmd->add_option("--out", common.out_override,
                    "output directory (overrides out_dir)");
  };

  auto* datagen = app.add_subcommand(
      "datagen", "enumerate configurations, run the benchmark, write "
                 "performance.csv / configs.tsv / problems.csv");
  add_common(datagen);
  datagen->add_option("--configs", configs_override,
                      "subsample to N configurations (0 = all)");

  auto* elacmd = app.add_subcommand(
      "ela", "compute landscape features, write features.csv");
  add_common(elacmd);

  auto* build = app.add_subcommand(
      "build", "assemble one knowledge graph per (budget, threshold)");
  add_common(build);
  build->add_option("--performance", perf_path, "performance CSV path");
  build->add_option("--configs-tsv", configs_path, "config TSV path");
  build->add_option("--problems", problems_path, "problems CSV path");
  build->add_option("--features", features_path, "features CSV path");

  auto* traincmd = app.add_subcommand(
      "train", "train one embedding on a stratified split of a KG");
  add_common(traincmd);
  traincmd->add_option("--kg", kg_path, "knowledge graph TSV")->required();
  traincmd->add_option("--k", k_override, "embedding dimension override");
  traincmd->add_option("--lr", lr_override, "learning rate override");
  traincmd->add_option("--loss", loss_override,
                       "loss override: pairwise|nll|self_adversarial");

  auto* gridcmd = app.add_subcommand(
      "gridsearch", "train every grid point, keep the best by validation F1");
  add_common(gridcmd);
  gridcmd->add_option("--kg", kg_path, "knowledge graph TSV")->required();

  auto* evalcmd = app.add_subcommand(
      "eval", "run an evaluation scenario and write the report");
  add_common(evalcmd);
  evalcmd->add_option("--kg", kg_path, "knowledge graph TSV")->required();
  evalcmd->add_option("--scenario", scenario_name,
                      "random_stratified | leave_problem_instances_out | "
                      "leave_algorithm_configs_out");
  evalcmd->add_option("--pipeline", pipeline_name, "score | rf | both");
  evalcmd->add_option("--repeats", repeats, "fold/repeat count override");
  evalcmd->add_option("--problems", problems_path,
                      "problems CSV (leave-instances scenario)");

  auto* predictcmd = app.add_subcommand(
      "predict", "classify (configuration, problem) pairs with a saved model");
  predictcmd->add_option("--model", model_path, "model file")->required();
  predictcmd->add_option("--kg", kg_path,
                         "knowledge graph TSV (required for --pipeline rf)");
  predictcmd->add_option("--pairs", pairs_path,
                         "CSV of config_id,problem_id pairs")->required();
  predictcmd->add_option("--pipeline", pipeline_name, "score | rf");
  predictcmd->add_option("--seed", predict_seed, "forest seed");
  predictcmd->add_option("--out", out_file, "predictions CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (datagen->parsed()) return cmd_datagen(common, configs_override);
    if (elacmd->parsed()) return cmd_ela(common);
    if (build->parsed())
      return cmd_build(common, perf_path, configs_path, problems_path,
                       features_path);
    if (traincmd->parsed())
      return cmd_train(common, kg_path, k_override, lr_override, loss_override);
    if (gridcmd->parsed()) return cmd_gridsearch(common, kg_path);
    if (evalcmd->parsed())
      return cmd_eval(common, kg_path, scenario_name, pipeline_name, repeats,
                      problems_path);
    if (predictcmd->parsed()) {
      std::string pl = pipeline_name == "both" ? "score" : pipeline_name;
      return cmd_predict(model_path, kg_path, pairs_path, pl, out_file,
                         predict_seed);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
