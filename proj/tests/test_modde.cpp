#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "kgperf/errors.hpp"
#include "kgperf/modde.hpp"
#include "kgperf/problems.hpp"
#include "kgperf/rng.hpp"

using namespace kgperf;

namespace {

ModdeConfig parse_config(const ConfigRecord& rec) {
  ModdeConfig c = ModdeConfig::from_record(rec);
  return c;
}

}  // namespace

TEST_CASE("module space enumerations have the documented sizes") {
  auto de = enumerate_configs("modDE", modde_module_space());
  CHECK(de.size() == 576);
  auto cma = enumerate_configs("modCMA", modcma_module_space());
  CHECK(cma.size() == 324);

  std::set<std::string> distinct;
  for (const auto& c : de) {
    std::string key;
    for (const auto& [m, v] : c.modules) key += m + "=" + v + ";";
    distinct.insert(key);
  }
  CHECK(distinct.size() == 576);
}

TEST_CASE("enumeration ids and order: rightmost module varies fastest") {
  auto de = enumerate_configs("modDE", modde_module_space());
  CHECK(de.front().id == "alg:modDE_0000");
  CHECK(de.back().id == "alg:modDE_0575");
  CHECK(de.front().family == "modDE");

  auto value_of = [](const ConfigRecord& c, const std::string& m) {
    for (const auto& [mod, val] : c.modules)
      if (mod == m) return val;
    return std::string();
  };
  CHECK(value_of(de[0], "lpsr") == "true");
  CHECK(value_of(de[1], "lpsr") == "false");
  CHECK(value_of(de[0], "adaptation_method") == "none");
  CHECK(value_of(de[2], "adaptation_method") == "shade");
  CHECK(value_of(de[4], "adaptation_method") == "jde");
  CHECK(value_of(de[6], "crossover") == "exp");
  // Leftmost module changes only every 576/3 = 192 entries.
  CHECK(value_of(de[191], "mutation_base") == "rand");
  CHECK(value_of(de[192], "mutation_base") == "best");
  CHECK(value_of(de[384], "mutation_base") == "target");
  CHECK(value_of(de[575], "mutation_base") == "target");
  CHECK(value_of(de[575], "mutation_reference") == "rand");
  CHECK(value_of(de[575], "lpsr") == "false");
}

TEST_CASE("modCMA space carries the published value lists") {
  auto space = modcma_module_space();
  REQUIRE(space.size() == 6);
  CHECK(space[0].first == "elitist");
  CHECK(space[1].second == std::vector<std::string>{"none", "mirrored",
                                                    "mirrored pairwise"});
  CHECK(space[3].second ==
        std::vector<std::string>{"default", "equal", "1/2^lambda"});
  CHECK(space[5].second == std::vector<std::string>{"csa", "psr"});
}

TEST_CASE("from_record parses all modules and rejects junk") {
  auto de = enumerate_configs("modDE", modde_module_space());
  ModdeConfig c = parse_config(de[0]);
  CHECK(c.mutation_base == MutationBase::rand);
  CHECK(c.mutation_reference == MutationReference::none);
  CHECK(c.mutation_n_comps == 1);
  CHECK(c.use_archive == true);
  CHECK(c.crossover == CrossoverKind::bin);
  CHECK(c.adaptation == Adaptation::none);
  CHECK(c.lpsr == true);

  ConfigRecord bad = de[0];
  bad.modules[0].second = "weird";
  CHECK_THROWS_AS(ModdeConfig::from_record(bad), ConfigError);

  ConfigRecord missing = de[0];
  missing.modules.pop_back();
  CHECK_THROWS_AS(ModdeConfig::from_record(missing), ConfigError);

  ConfigRecord unknown = de[0];
  unknown.modules.push_back({"not_a_module", "x"});
  CHECK_THROWS_AS(ModdeConfig::from_record(unknown), ConfigError);
}

TEST_CASE("trajectories: length, monotonicity, determinism, final population") {
  Problem sphere(1, 1, 3);
  Problem rastrigin(6, 1, 3);
  auto de = enumerate_configs("modDE", modde_module_space());

  // Stride 37 visits 16 configs covering every module value at least once.
  for (std::size_t idx = 0; idx < de.size(); idx += 37) {
    ModdeConfig c = parse_config(de[idx]);
    c.pop0 = 8;
    const long budget = 160;
    RunStats stats = run_modde_stats(c, sphere, budget, 1234 + idx);

    CHECK(stats.trajectory.size() == budget);
    CHECK(stats.evaluations == budget);
    CHECK(std::is_sorted(stats.trajectory.rbegin(), stats.trajectory.rend()));
    for (double v : stats.trajectory) {
      CHECK(std::isfinite(v));
      CHECK(v >= 0);
    }
    if (c.lpsr) CHECK(stats.final_population == 4);
    else CHECK(stats.final_population == 8);

    auto again = run_modde(c, sphere, budget, 1234 + idx);
    CHECK(again == stats.trajectory);

    RunStats other = run_modde_stats(c, rastrigin, budget, 99 + idx);
    CHECK(other.trajectory.size() == budget);
    CHECK(std::is_sorted(other.trajectory.rbegin(), other.trajectory.rend()));
  }
}

TEST_CASE("adaptive parameters stay inside their domains") {
  Problem p(6, 2, 4);
  auto space = modde_module_space();
  auto de = enumerate_configs("modDE", space);
  int checked = 0;
  for (std::size_t idx = 0; idx < de.size(); idx += 11) {
    ModdeConfig c = parse_config(de[idx]);
    c.pop0 = 10;
    RunStats stats = run_modde_stats(c, p, 300, 555 + idx);
    if (stats.f_min > stats.f_max) continue;  // no generation ran
    ++checked;
    CHECK(stats.f_min > 0.0);
    CHECK(stats.f_max <= 1.0);
    CHECK(stats.cr_min >= 0.0);
    CHECK(stats.cr_max <= 1.0);
    if (c.adaptation == Adaptation::none) {
      CHECK(stats.f_min == 0.5);
      CHECK(stats.f_max == 0.5);
      CHECK(stats.cr_min == 0.9);
      CHECK(stats.cr_max == 0.9);
    }
  }
  CHECK(checked > 40);
}

TEST_CASE("budget below the initial population is a config error") {
  Problem p(1, 1, 5);
  ModdeConfig c;
  CHECK_THROWS_AS(run_modde(c, p, 49, 1), ConfigError);  // pop0 = 10*5
  auto traj = run_modde(c, p, 50, 1);
  CHECK(traj.size() == 50);
}

TEST_CASE("optimizer makes progress on the sphere for nearly every seed") {
  Problem p(1, 1, 3);
  ModdeConfig c;  // rand/none/1, no adaptation: plain DE/rand/1/bin
  c.pop0 = 12;
  int improved = 0;
  for (int seed = 0; seed < 100; ++seed) {
    auto traj = run_modde(c, p, 600, seed);
    if (traj.back() < traj[c.pop0 - 1] * 0.5) ++improved;
  }
  CHECK(improved >= 95);
}

TEST_CASE("pbest and archive variants run and improve on an easy problem") {
  Problem p(1, 1, 4);
  ModdeConfig c;
  c.mutation_base = MutationBase::target;
  c.mutation_reference = MutationReference::pbest;
  c.use_archive = true;
  c.adaptation = Adaptation::shade;
  c.lpsr = true;
  c.pop0 = 12;
  auto traj = run_modde(c, p, 1000, 42);
  CHECK(traj.back() < 1e-2);
}

TEST_CASE("collect_performance medians tie out against direct reruns") {
  auto de = enumerate_configs("modDE", modde_module_space());
  std::vector<ConfigRecord> recs{de[0], de[123]};
  std::vector<ModdeConfig> parsed;
  for (const auto& r : recs) {
    ModdeConfig c = parse_config(r);
    c.pop0 = 8;
    parsed.push_back(c);
  }
  auto problems = make_problem_set({1, 6}, 1, 2);
  std::vector<long> budgets{50, 120};

  auto records = collect_performance(recs, parsed, problems, budgets, 3, 77, 1);
  REQUIRE(records.size() == 4);
  CHECK(records[0].config_id == recs[0].id);
  CHECK(records[0].problem_id == problems[0].record().id);
  CHECK(records[0].budgets == budgets);

  // Medians recomputed by hand from independent reruns.
  for (const auto& rec : records) {
    const ConfigRecord& cr = rec.config_id == recs[0].id ? recs[0] : recs[1];
    const ModdeConfig& cc = rec.config_id == recs[0].id ? parsed[0] : parsed[1];
    const Problem& prob = rec.problem_id == problems[0].record().id
                              ? problems[0]
                              : problems[1];
    for (std::size_t b = 0; b < budgets.size(); ++b) {
      std::vector<double> vals;
      for (int run = 0; run < 3; ++run) {
        auto seed = derive_run_seed(77, cr.id, rec.problem_id, run);
        vals.push_back(run_modde(cc, prob, 120, seed)[budgets[b] - 1]);
      }
      std::sort(vals.begin(), vals.end());
      CHECK(rec.median_precision[b] == vals[1]);
    }
  }
}

TEST_CASE("collect_performance is thread-count invariant") {
  auto de = enumerate_configs("modDE", modde_module_space());
  std::vector<ConfigRecord> recs{de[5], de[200], de[570]};
  std::vector<ModdeConfig> parsed;
  for (const auto& r : recs) {
    ModdeConfig c = parse_config(r);
    c.pop0 = 6;
    parsed.push_back(c);
  }
  auto problems = make_problem_set({2}, 2, 2);
  auto one = collect_performance(recs, parsed, problems, {80}, 3, 9, 1);
  auto two = collect_performance(recs, parsed, problems, {80}, 3, 9, 2);
  CHECK(one == two);
}

TEST_CASE("collect_performance validates the run count and budgets") {
  auto de = enumerate_configs("modDE", modde_module_space());
  std::vector<ConfigRecord> recs{de[0]};
  std::vector<ModdeConfig> parsed{parse_config(de[0])};
  parsed[0].pop0 = 6;
  auto problems = make_problem_set({1}, 1, 2);
  CHECK_THROWS_AS(
      collect_performance(recs, parsed, problems, {80}, 2, 1, 1),
      ConfigError);
  CHECK_THROWS_AS(collect_performance(recs, parsed, problems, {}, 3, 1, 1),
                  ConfigError);
  // Duplicate budgets collapse.
  auto out = collect_performance(recs, parsed, problems, {80, 80, 40}, 3, 1, 1);
  CHECK(out[0].budgets == std::vector<long>{40, 80});
}

TEST_CASE("scalar validation") {
  ModdeConfig c;
  c.f0 = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ModdeConfig{};
  c.cr0 = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ModdeConfig{};
  c.pbest_rate = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ModdeConfig{};
  c.mutation_n_comps = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ModdeConfig{};
  c.validate();
  CHECK(c.initial_population(5) == 50);
  c.pop0 = 24;
  CHECK(c.initial_population(5) == 24);
}
