#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "kgperf/io.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "kgperf_test_cli";

int run_cli(const std::string& args) {
  fs::create_directories(kRoot);
  std::string cmd = std::string(KGPERF_CLI_PATH) + " " + args + " > " +
                    (kRoot / "last.log").string() + " 2>&1";
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string last_log() {
  return kgperf::io::read_file((kRoot / "last.log").string());
}

/// Small but real end-to-end setup: 4 configurations, 2 functions (one easy,
/// one multimodal so both performance classes appear), 3 instances, D=2.
std::string write_config(const std::string& out_dir) {
  fs::create_directories(kRoot);
  fs::create_directories(out_dir);
  std::string path = (kRoot / "run.cfg").string();
  kgperf::io::write_file(path,
                         "dimension = 2\n"
                         "functions = 1, 6\n"
                         "instances = 3\n"
                         "budgets = 300, 600\n"
                         "thresholds = 1.0, 0.01\n"
                         "runs = 3\n"
                         "seed = 7\n"
                         "configs = 4\n"
                         "threads = 2\n"
                         "sample_size = 30\n"
                         "sample_repetitions = 3\n"
                         "grid_k = 8\n"
                         "grid_lr = 0.05\n"
                         "grid_loss = nll\n"
                         "max_epochs = 40\n"
                         "patience = 40\n"
                         "negatives_per_positive = 4\n"
                         "batch_size = 64\n"
                         "repeats = 1\n"
                         "rf_trees = 5\n"
                         "out_dir = " + out_dir + "\n");
  return path;
}

}  // namespace

TEST_CASE("usage errors exit with code 1") {
  CHECK(run_cli("") == 1);
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("no_such_command") == 1);
  CHECK(run_cli("datagen") == 1);  // --config is required
  CHECK(run_cli("train --config /nonexistent.cfg --kg x.tsv") == 1);

  std::string bad = (kRoot / "bad.cfg").string();
  fs::create_directories(kRoot);
  kgperf::io::write_file(bad, "dimenson = 5\n");
  CHECK(run_cli("datagen --config " + bad) == 1);
  CHECK(last_log().find("unknown key") != std::string::npos);
}

TEST_CASE("full pipeline closes over its own artifacts") {
  const std::string out = (kRoot / "out").string();
  const std::string cfg = write_config(out);

  REQUIRE(run_cli("datagen --config " + cfg) == 0);
  CHECK(fs::exists(out + "/configs.tsv"));
  CHECK(fs::exists(out + "/problems.csv"));
  CHECK(fs::exists(out + "/performance.csv"));

  REQUIRE(run_cli("ela --config " + cfg) == 0);
  CHECK(fs::exists(out + "/features.csv"));

  REQUIRE(run_cli("build --config " + cfg) == 0);
  // One KG per budget x threshold, plus the shared vocabulary.
  CHECK(fs::exists(out + "/kg_D2_B300_T1.tsv"));
  CHECK(fs::exists(out + "/kg_D2_B300_T0.01.tsv"));
  CHECK(fs::exists(out + "/kg_D2_B600_T1.tsv"));
  CHECK(fs::exists(out + "/kg_D2_B600_T0.01.tsv"));
  CHECK(fs::exists(out + "/vocabulary.tsv"));

  const std::string kg = out + "/kg_D2_B600_T0.01.tsv";
  REQUIRE(run_cli("train --config " + cfg + " --kg " + kg) == 0);
  CHECK(fs::exists(out + "/model.tsv"));
  CHECK(fs::exists(out + "/training_log.csv"));
  {
    auto text = kgperf::io::read_file(out + "/training_log.csv");
    CHECK(kgperf::io::split_lines(text)[0] ==
          "check_index,epoch,train_loss,val_f1");
  }

  REQUIRE(run_cli("gridsearch --config " + cfg + " --kg " + kg) == 0);
  CHECK(fs::exists(out + "/grid_results.csv"));
  {
    auto text = kgperf::io::read_file(out + "/grid_results.csv");
    auto lines = kgperf::io::split_lines(text);
    REQUIRE(lines.size() == 2);  // singleton grid
    CHECK(lines[0] == "k,learning_rate,loss,val_f1,best_epoch");
  }

  REQUIRE(run_cli("eval --config " + cfg + " --kg " + kg +
                  " --scenario random_stratified") == 0);
  CHECK(fs::exists(out + "/report_random_stratified_score.csv"));
  CHECK(fs::exists(out + "/report_random_stratified_rf.csv"));
  CHECK(last_log().find("f1_paper_compatible") != std::string::npos);

  // Prediction over both pipelines from the trained artifacts.
  const std::string pairs = (kRoot / "pairs.csv").string();
  kgperf::io::write_file(pairs,
                         "config_id,problem_id\n"
                         "alg:modDE_0000,problem:f1_i1_d2\n"
                         "alg:modDE_0000,problem:f6_i2_d2\n");
  REQUIRE(run_cli("predict --model " + out + "/model.tsv --pairs " + pairs +
                  " --out " + out + "/pred_score.csv") == 0);
  {
    auto text = kgperf::io::read_file(out + "/pred_score.csv");
    auto lines = kgperf::io::split_lines(text);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "config_id,problem_id,predicted_label,score_or_proba");
    auto fields = kgperf::io::split(lines[1], ',');
    REQUIRE(fields.size() == 4);
    CHECK((fields[2] == "solved" || fields[2] == "not_solved"));
  }
  REQUIRE(run_cli("predict --model " + out + "/model.tsv --pairs " + pairs +
                  " --kg " + kg + " --pipeline rf --out " + out +
                  "/pred_rf.csv") == 0);
  CHECK(fs::exists(out + "/pred_rf.csv"));

  // Unknown entities in the pairs file are a data error.
  const std::string bad_pairs = (kRoot / "bad_pairs.csv").string();
  kgperf::io::write_file(bad_pairs,
                         "config_id,problem_id\n"
                         "alg:modDE_9999,problem:f1_i1_d2\n");
  CHECK(run_cli("predict --model " + out + "/model.tsv --pairs " + bad_pairs +
                " --out " + out + "/pred_bad.csv") == 2);

  // Missing inputs are data errors, not crashes.
  CHECK(run_cli("train --config " + cfg + " --kg " + out +
                "/no_such_kg.tsv") == 2);
  CHECK(run_cli("build --config " + cfg + " --performance " + out +
                "/no_such.csv") == 2);
}

TEST_CASE("datagen output is byte-identical across reruns") {
  const std::string out_a = (kRoot / "rerun_a").string();
  const std::string out_b = (kRoot / "rerun_b").string();
  const std::string cfg_a = write_config(out_a);
  REQUIRE(run_cli("datagen --config " + cfg_a) == 0);
  const std::string cfg_b = write_config(out_b);
  REQUIRE(run_cli("datagen --config " + cfg_b) == 0);

  for (const char* name :
       {"configs.tsv", "problems.csv", "performance.csv"}) {
    auto a = kgperf::io::read_file(out_a + "/" + name);
    auto b = kgperf::io::read_file(out_b + "/" + name);
    CHECK(a == b);
  }
}

TEST_CASE("datagen --configs overrides the subsample size") {
  const std::string out = (kRoot / "subsample").string();
  const std::string cfg = write_config(out);
  REQUIRE(run_cli("datagen --config " + cfg + " --configs 2") == 0);
  auto text = kgperf::io::read_file(out + "/configs.tsv");
  std::set<std::string> heads;
  for (auto line : kgperf::io::split_lines(text))
    heads.insert(std::string(kgperf::io::split(line, '\t')[0]));
  CHECK(heads.size() == 2);
}
