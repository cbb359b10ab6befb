#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <string>
#include <vector>

#include "kgperf/errors.hpp"
#include "kgperf/io.hpp"
#include "kgperf/runconfig.hpp"

using namespace kgperf;

namespace {

RunConfig parse(const std::string& text) {
  return parse_run_config(text, "cfg");
}

}  // namespace

TEST_CASE("empty text yields the defaults") {
  RunConfig cfg = parse("");
  CHECK(cfg.dimension == 5);
  CHECK(cfg.functions == std::vector<int>{1, 2, 3, 4, 5, 6, 7});
  CHECK(cfg.instances == 5);
  CHECK(cfg.budgets == std::vector<long>{2000, 5000, 10000, 50000});
  CHECK(cfg.thresholds == std::vector<double>{1.0, 0.1, 0.001});
  CHECK(cfg.runs == 5);
  CHECK(cfg.seed == 1);
  CHECK(cfg.configs == 0);
  CHECK(cfg.threads == 1);
  CHECK(cfg.f0 == 0.5);
  CHECK(cfg.cr0 == 0.9);
  CHECK(cfg.pop_size == 0);
  CHECK(cfg.pbest_rate == 0.1);
  CHECK(cfg.sample_strategy == ela::SampleStrategy::halton);
  CHECK(cfg.sample_size == 0);
  CHECK(cfg.sample_repetitions == 5);
  CHECK(cfg.grid_k == std::vector<int>{50, 100, 150, 200});
  CHECK(cfg.grid_lr == std::vector<double>{1e-3, 1e-4});
  REQUIRE(cfg.grid_loss.size() == 3);
  CHECK(cfg.grid_loss[0] == Loss::pairwise);
  CHECK(cfg.grid_loss[1] == Loss::nll);
  CHECK(cfg.grid_loss[2] == Loss::self_adversarial);
  CHECK(cfg.max_epochs == 500);
  CHECK(cfg.patience == 10);
  CHECK(cfg.negatives_per_positive == 10);
  CHECK(cfg.batch_size == 512);
  CHECK(cfg.margin == 1.0);
  CHECK(cfg.adversarial_temperature == 1.0);
  CHECK(cfg.l2 == 0.0);
  CHECK(cfg.repeats == 5);
  CHECK(cfg.rf_trees == 10);
  CHECK(cfg.out_dir == ".");
}

TEST_CASE("every key parses, with comments and loose whitespace") {
  RunConfig cfg = parse(
      "# full override\n"
      "dimension = 2\n"
      "functions = 1, 2, 6\n"
      "instances=3\n"
      "budgets = 400 , 800\n"
      "thresholds = 1.0, 0.01\n"
      "runs = 3\n"
      "seed = 42\n"
      "configs = 16   # trailing comment\n"
      "threads = 2\n"
      "f0 = 0.6\n"
      "cr0 = 0.8\n"
      "pop_size = 20\n"
      "pbest_rate = 0.2\n"
      "sample_strategy = uniform\n"
      "sample_size = 64\n"
      "sample_repetitions = 3\n"
      "\n"
      "grid_k = 16, 32\n"
      "grid_lr = 0.01\n"
      "grid_loss = nll, pairwise\n"
      "max_epochs = 60\n"
      "patience = 5\n"
      "negatives_per_positive = 4\n"
      "batch_size = 64\n"
      "margin = 2.0\n"
      "adversarial_temperature = 0.5\n"
      "l2 = 0.001\n"
      "repeats = 2\n"
      "rf_trees = 7\n"
      "out_dir = /tmp/somewhere\n");
  CHECK(cfg.dimension == 2);
  CHECK(cfg.functions == std::vector<int>{1, 2, 6});
  CHECK(cfg.instances == 3);
  CHECK(cfg.budgets == std::vector<long>{400, 800});
  CHECK(cfg.thresholds == std::vector<double>{1.0, 0.01});
  CHECK(cfg.runs == 3);
  CHECK(cfg.seed == 42);
  CHECK(cfg.configs == 16);
  CHECK(cfg.threads == 2);
  CHECK(cfg.f0 == 0.6);
  CHECK(cfg.cr0 == 0.8);
  CHECK(cfg.pop_size == 20);
  CHECK(cfg.pbest_rate == 0.2);
  CHECK(cfg.sample_strategy == ela::SampleStrategy::uniform);
  CHECK(cfg.sample_size == 64);
  CHECK(cfg.sample_repetitions == 3);
  CHECK(cfg.grid_k == std::vector<int>{16, 32});
  CHECK(cfg.grid_lr == std::vector<double>{0.01});
  REQUIRE(cfg.grid_loss.size() == 2);
  CHECK(cfg.grid_loss[0] == Loss::nll);
  CHECK(cfg.grid_loss[1] == Loss::pairwise);
  CHECK(cfg.max_epochs == 60);
  CHECK(cfg.patience == 5);
  CHECK(cfg.negatives_per_positive == 4);
  CHECK(cfg.batch_size == 64);
  CHECK(cfg.margin == 2.0);
  CHECK(cfg.adversarial_temperature == 0.5);
  CHECK(cfg.l2 == 0.001);
  CHECK(cfg.repeats == 2);
  CHECK(cfg.rf_trees == 7);
  CHECK(cfg.out_dir == "/tmp/somewhere");
}

TEST_CASE("unknown keys and malformed lines are usage errors") {
  CHECK_THROWS_AS(parse("dimenson = 5\n"), ConfigError);
  CHECK_THROWS_AS(parse("just words\n"), ConfigError);
  CHECK_THROWS_AS(parse("= 5\n"), ConfigError);
  CHECK_THROWS_AS(parse("dimension = five\n"), ConfigError);
  CHECK_THROWS_AS(parse("budgets = 100, x\n"), ConfigError);
  CHECK_THROWS_AS(parse("grid_loss = ridge\n"), ConfigError);
  CHECK_THROWS_AS(parse("sample_strategy = sobol\n"), ConfigError);
  // The offending line number is part of the message.
  try {
    parse("dimension = 2\nbogus_key = 1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("validation rejects out-of-range values") {
  CHECK_THROWS_AS(parse("dimension = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("functions = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("functions = 8\n"), ConfigError);
  CHECK_THROWS_AS(parse("functions =\n"), ConfigError);
  CHECK_THROWS_AS(parse("instances = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("budgets = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("thresholds = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse("runs = 4\n"), ConfigError);  // must be odd
  CHECK_THROWS_AS(parse("runs = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("configs = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse("sample_repetitions = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("grid_k = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("grid_lr = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("repeats = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("rf_trees = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("max_epochs = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("f0 = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("cr0 = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse("pbest_rate = 0\n"), ConfigError);
}

TEST_CASE("train_config mirrors the shared training knobs") {
  RunConfig cfg = parse(
      "grid_k = 32, 64\n"
      "grid_lr = 0.01, 0.001\n"
      "grid_loss = self_adversarial\n"
      "max_epochs = 77\n"
      "patience = 6\n"
      "negatives_per_positive = 3\n"
      "batch_size = 128\n"
      "margin = 1.5\n"
      "adversarial_temperature = 2.0\n"
      "l2 = 0.01\n"
      "seed = 11\n");
  TrainConfig t = cfg.train_config();
  // The grid fronts seed the scalar fields; a singleton grid pins them.
  CHECK(t.k == 32);
  CHECK(t.learning_rate == 0.01);
  CHECK(t.loss == Loss::self_adversarial);
  CHECK(t.max_epochs == 77);
  CHECK(t.patience == 6);
  CHECK(t.negatives_per_positive == 3);
  CHECK(t.batch_size == 128);
  CHECK(t.margin == 1.5);
  CHECK(t.adv_alpha == 2.0);
  CHECK(t.l2 == 0.01);
  CHECK(t.seed == 11);
}

TEST_CASE("load_run_config maps missing files to usage errors") {
  CHECK_THROWS_AS(load_run_config("/nonexistent/run.cfg"), ConfigError);

  auto dir = std::filesystem::temp_directory_path() / "kgperf_test_runconfig";
  std::filesystem::create_directories(dir);
  auto path = (dir / "run.cfg").string();
  io::write_file(path, "dimension = 3\nseed = 8\n");
  RunConfig cfg = load_run_config(path);
  CHECK(cfg.dimension == 3);
  CHECK(cfg.seed == 8);
}
