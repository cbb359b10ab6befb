#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "kgperf/ela.hpp"
#include "kgperf/errors.hpp"
#include "kgperf/io.hpp"
#include "kgperf/kg.hpp"
#include "kgperf/rng.hpp"

using namespace kgperf;

namespace {

/// Synthetic inputs for build_kg: C configs x P problems with controllable
/// precision values.
struct Fixture {
  std::vector<ConfigRecord> configs;
  std::vector<ProblemRecord> problems;
  ela::BinnedFeatureTable features;
  std::vector<PerformanceRecord> perf;
};

Fixture make_fixture(int num_configs, int num_problems,
                     const std::vector<long>& budgets, std::uint64_t seed) {
  Fixture fx;
  for (int c = 0; c < num_configs; ++c) {
    ConfigRecord r;
    r.id = config_label("modDE", c);
    r.family = "modDE";
    r.modules = {{"crossover", c % 2 ? "bin" : "exp"},
                 {"lpsr", c % 3 ? "true" : "false"}};
    fx.configs.push_back(r);
  }
  ela::RawFeatureTable raw;
  raw.features = {"alpha", "beta"};
  Rng rng(seed);
  for (int p = 0; p < num_problems; ++p) {
    ProblemRecord r;
    r.function = "f" + std::to_string(1 + p % 3);
    r.instance_index = 1 + p / 3;
    r.dimension = 5;
    r.id = problem_label(r.function, r.instance_index, r.dimension);
    r.problem_class = p % 3 == 0 ? "separable" : "multimodal_weak";
    fx.problems.push_back(r);
    raw.problems.push_back(r.id);
    raw.values.push_back({rng.uniform(0, 1), rng.uniform(-3, 3)});
  }
  fx.features = ela::bin_features(raw);
  for (const auto& c : fx.configs)
    for (const auto& p : fx.problems) {
      PerformanceRecord rec;
      rec.config_id = c.id;
      rec.problem_id = p.id;
      double precision = rng.uniform(0, 2);
      for (long b : budgets) {
        rec.budgets.push_back(b);
        rec.median_precision.push_back(precision);
        precision *= rng.uniform(0, 1);  // best-so-far shrinks with budget
      }
      fx.perf.push_back(rec);
    }
  return fx;
}

std::set<std::pair<std::string, std::string>> solved_pairs(
    const KnowledgeGraph& kg_in) {
  KnowledgeGraph kg = kg_in;
  Schema s = Schema::resolve(kg);
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& t : kg.triples())
    if (t.rel == s.solved)
      out.insert({kg.entities().label(t.head), kg.entities().label(t.tail)});
  return out;
}

KnowledgeGraph random_kg(Rng& rng, int triples) {
  KnowledgeGraph kg;
  for (int e = 0; e < 30; ++e) kg.entity("node_" + std::to_string(e));
  for (int r = 0; r < 4; ++r) kg.relation("rel_" + std::to_string(r));
  int added = 0;
  while (added < triples) {
    Triple t{static_cast<EntityId>(rng.uniform_index(30)),
             static_cast<RelationId>(rng.uniform_index(4)),
             static_cast<EntityId>(rng.uniform_index(30))};
    if (kg.add(t)) ++added;
  }
  return kg;
}

}  // namespace

TEST_CASE("add has set semantics and contains works") {
  KnowledgeGraph kg;
  CHECK(kg.add("a", "r", "b"));
  CHECK_FALSE(kg.add("a", "r", "b"));
  CHECK(kg.add("b", "r", "a"));
  CHECK(kg.triples().size() == 2);
  EntityId a = kg.entity("a"), b = kg.entity("b");
  RelationId r = kg.relation("r");
  CHECK(kg.contains({a, r, b}));
  CHECK_FALSE(kg.contains({a, r, a}));
}

TEST_CASE("vocabulary labels are validated and stable") {
  KnowledgeGraph kg;
  EntityId a = kg.entity("alpha");
  CHECK(kg.entity("alpha") == a);
  CHECK(kg.entities().label(a) == "alpha");
  CHECK(kg.entities().find("alpha").has_value());
  CHECK_FALSE(kg.entities().find("beta").has_value());
  CHECK_THROWS_AS(kg.entity(""), DataError);
  CHECK_THROWS_AS(kg.entity("a\tb"), DataError);
  CHECK_THROWS_AS(kg.entity("a\nb"), DataError);
  CHECK(kg.entity("has space") != a);  // spaces are legal in module values
}

TEST_CASE("vocabulary survives many interns (no iterator/view invalidation)") {
  KnowledgeGraph kg;
  std::vector<EntityId> ids;
  for (int i = 0; i < 2000; ++i)
    ids.push_back(kg.entity("entity_number_" + std::to_string(i)));
  for (int i = 0; i < 2000; ++i) {
    CHECK(kg.entities().label(ids[i]) == "entity_number_" + std::to_string(i));
    CHECK(kg.entity("entity_number_" + std::to_string(i)) == ids[i]);
  }
}

TEST_CASE("with_relation and with_head_relation match a linear scan") {
  Rng rng(7);
  KnowledgeGraph kg = random_kg(rng, 200);
  for (RelationId r = 0; r < 4; ++r) {
    std::vector<std::uint32_t> expect;
    for (std::uint32_t i = 0; i < kg.triples().size(); ++i)
      if (kg.triples()[i].rel == r) expect.push_back(i);
    auto got = kg.with_relation(r);
    CHECK(std::vector<std::uint32_t>(got.begin(), got.end()) == expect);
  }
  for (EntityId h = 0; h < 30; ++h)
    for (RelationId r = 0; r < 4; ++r) {
      std::vector<std::uint32_t> expect;
      for (std::uint32_t i = 0; i < kg.triples().size(); ++i)
        if (kg.triples()[i].head == h && kg.triples()[i].rel == r)
          expect.push_back(i);
      auto got = kg.with_head_relation(h, r);
      CHECK(std::vector<std::uint32_t>(got.begin(), got.end()) == expect);
    }
}

TEST_CASE("build_kg emits the documented edge inventory") {
  auto fx = make_fixture(4, 6, {100, 200}, 11);
  KnowledgeGraph kg = build_kg(fx.configs, fx.problems, fx.features, fx.perf,
                               100, 0.5);
  Schema s = Schema::resolve(kg);

  int perf_edges = 0, module_edges = 0, family_edges = 0;
  int instance_edges = 0, class_edges = 0, feature_edges = 0;
  for (const auto& t : kg.triples()) {
    if (s.is_performance(t.rel)) ++perf_edges;
    else if (t.rel == s.has_module_setting) ++module_edges;
    else if (t.rel == s.is_configuration_of) ++family_edges;
    else if (t.rel == s.instance_of_problem) ++instance_edges;
    else if (t.rel == s.has_problem_class) ++class_edges;
    else if (t.rel == s.has_feature_bin) ++feature_edges;
  }
  CHECK(perf_edges == 4 * 6);
  CHECK(module_edges == 4 * 2);
  CHECK(family_edges == 4);
  CHECK(instance_edges == 6);
  CHECK(class_edges == 6);
  CHECK(feature_edges == 6 * 2);
}

TEST_CASE("threshold boundary: precision equal to threshold is solved") {
  auto fx = make_fixture(1, 1, {100}, 3);
  fx.perf[0].median_precision[0] = 0.25;
  KnowledgeGraph kg = build_kg(fx.configs, fx.problems, fx.features, fx.perf,
                               100, 0.25);
  Schema s = Schema::resolve(kg);
  int solved = 0;
  for (const auto& t : kg.triples())
    if (t.rel == s.solved) ++solved;
  CHECK(solved == 1);

  KnowledgeGraph kg2 = build_kg(fx.configs, fx.problems, fx.features, fx.perf,
                                100, 0.2499999);
  Schema s2 = Schema::resolve(kg2);
  for (const auto& t : kg2.triples()) CHECK(t.rel != s2.solved);
}

TEST_CASE("threshold monotonicity: solved set grows with the threshold") {
  auto fx = make_fixture(5, 6, {100}, 19);
  KnowledgeGraph lo = build_kg(fx.configs, fx.problems, fx.features, fx.perf,
                               100, 0.3);
  KnowledgeGraph hi = build_kg(fx.configs, fx.problems, fx.features, fx.perf,
                               100, 1.1);
  auto lo_set = solved_pairs(lo), hi_set = solved_pairs(hi);
  CHECK(std::includes(hi_set.begin(), hi_set.end(), lo_set.begin(),
                      lo_set.end()));
}

TEST_CASE("budget monotonicity under non-increasing trajectories") {
  auto fx = make_fixture(5, 6, {100, 200}, 23);
  KnowledgeGraph small = build_kg(fx.configs, fx.problems, fx.features, fx.perf,
                                  100, 0.5);
  KnowledgeGraph large = build_kg(fx.configs, fx.problems, fx.features, fx.perf,
                                  200, 0.5);
  auto s_set = solved_pairs(small), l_set = solved_pairs(large);
  CHECK(std::includes(l_set.begin(), l_set.end(), s_set.begin(), s_set.end()));
}

TEST_CASE("build_kg referential integrity errors") {
  auto fx = make_fixture(2, 2, {100}, 5);

  SUBCASE("unknown config in a performance record") {
    fx.perf[0].config_id = "alg:modDE_9999";
    CHECK_THROWS_AS(build_kg(fx.configs, fx.problems, fx.features, fx.perf,
                             100, 0.5),
                    DataError);
  }
  SUBCASE("unknown problem in a performance record") {
    fx.perf[0].problem_id = "problem:f9_i9_d9";
    CHECK_THROWS_AS(build_kg(fx.configs, fx.problems, fx.features, fx.perf,
                             100, 0.5),
                    DataError);
  }
  SUBCASE("missing pair") {
    fx.perf.pop_back();
    CHECK_THROWS_AS(build_kg(fx.configs, fx.problems, fx.features, fx.perf,
                             100, 0.5),
                    DataError);
  }
  SUBCASE("duplicate pair") {
    fx.perf.push_back(fx.perf[0]);
    CHECK_THROWS_AS(build_kg(fx.configs, fx.problems, fx.features, fx.perf,
                             100, 0.5),
                    DataError);
  }
  SUBCASE("missing budget") {
    CHECK_THROWS_AS(build_kg(fx.configs, fx.problems, fx.features, fx.perf,
                             999, 0.5),
                    DataError);
  }
  SUBCASE("problem without feature row") {
    fx.features.problems[0] = "problem:f9_i9_d9";
    CHECK_THROWS_AS(build_kg(fx.configs, fx.problems, fx.features, fx.perf,
                             100, 0.5),
                    DataError);
  }
}

TEST_CASE("serialize round trip is a fixed point") {
  SUBCASE("empty graph") {
    KnowledgeGraph kg;
    CHECK(serialize_kg(kg).empty());
    KnowledgeGraph back = deserialize_kg("", "mem");
    CHECK(kg_equivalent(kg, back));
  }
  SUBCASE("one triple") {
    KnowledgeGraph kg;
    kg.add("a", "r", "b");
    KnowledgeGraph back = deserialize_kg(serialize_kg(kg), "mem");
    CHECK(kg_equivalent(kg, back));
    CHECK(serialize_kg(back) == serialize_kg(kg));
  }
  SUBCASE("random 100-triple graphs") {
    Rng rng(99);
    for (int rep = 0; rep < 10; ++rep) {
      KnowledgeGraph kg = random_kg(rng, 100);
      std::string text = serialize_kg(kg);
      KnowledgeGraph back = deserialize_kg(text, "mem");
      CHECK(kg_equivalent(kg, back));
      CHECK(serialize_kg(back) == text);  // second pass is byte-identical
    }
  }
}

TEST_CASE("serialization is deterministic and sorted") {
  Rng rng(5);
  KnowledgeGraph kg = random_kg(rng, 60);
  std::string a = serialize_kg(kg);
  std::string b = serialize_kg(kg);
  CHECK(a == b);
  auto lines = io::split_lines(a);
  CHECK(std::is_sorted(lines.begin(), lines.end()));
}

TEST_CASE("deserialize rejects malformed lines with the line number") {
  CHECK_THROWS_WITH_AS(deserialize_kg("a\tr\n", "mem"),
                       doctest::Contains("line 1"), DataError);
  CHECK_THROWS_AS(deserialize_kg("a\tr\tb\textra\n", "mem"), DataError);
  CHECK_THROWS_AS(deserialize_kg("a\tr\tb\na\tr\tb\n", "mem"), DataError);
}

TEST_CASE("performance_triples returns exactly the performance edges in order") {
  auto fx = make_fixture(3, 4, {100}, 31);
  KnowledgeGraph kg = build_kg(fx.configs, fx.problems, fx.features, fx.perf,
                               100, 0.5);
  Schema s = Schema::resolve(kg);
  auto perf = performance_triples(kg, s);
  CHECK(perf.size() == 12);
  std::vector<Triple> expect;
  for (const auto& t : kg.triples())
    if (s.is_performance(t.rel)) expect.push_back(t);
  // Same multiset; solved edges listed before not_solved.
  std::size_t first_ns = 0;
  while (first_ns < perf.size() && perf[first_ns].rel == s.solved) ++first_ns;
  for (std::size_t i = first_ns; i < perf.size(); ++i)
    CHECK(perf[i].rel == s.not_solved);
  CHECK(perf.size() == expect.size());

  KnowledgeGraph desc;
  desc.add("a", "has_module_setting", "m");
  Schema sd = Schema::resolve(desc);
  CHECK(performance_triples(desc, sd).empty());
}

TEST_CASE("solved fraction survives the build") {
  auto fx = make_fixture(6, 5, {100}, 41);
  int direct_solved = 0;
  for (const auto& r : fx.perf)
    if (r.precision_at(100) <= 0.7) ++direct_solved;
  KnowledgeGraph kg = build_kg(fx.configs, fx.problems, fx.features, fx.perf,
                               100, 0.7);
  Schema s = Schema::resolve(kg);
  int kg_solved = 0;
  for (const auto& t : performance_triples(kg, s))
    if (t.rel == s.solved) ++kg_solved;
  CHECK(kg_solved == direct_solved);
}

TEST_CASE("check_performance_exclusive rejects contradictory labels") {
  KnowledgeGraph kg;
  kg.add("a", "solved", "p");
  Schema s = Schema::resolve(kg);
  check_performance_exclusive(kg, s);
  kg.add("a", "not_solved", "p");
  CHECK_THROWS_AS(check_performance_exclusive(kg, s), DataError);
}

TEST_CASE("vocabulary dump lists entities then relations") {
  KnowledgeGraph kg;
  kg.add("b", "r2", "a");
  std::string dump = serialize_vocabulary(kg);
  CHECK(dump == "b\tentity\na\tentity\nr2\trelation\n");
}

TEST_CASE("entity label helpers produce the documented shapes") {
  CHECK(problem_label("f3", 2, 5) == "problem:f3_i2_d5");
  CHECK(config_label("modDE", 17) == "alg:modDE_0017");
  CHECK(config_label("modDE", 417) == "alg:modDE_0417");
  CHECK(module_label("crossover", "bin") == "module:crossover=bin");
  CHECK(feature_bin_label("y_skewness", 7) == "feature:y_skewness_bin_07");
  CHECK(class_label("multimodal_weak") == "class:multimodal_weak");
  CHECK(family_label("modDE") == "family:modDE");
  CHECK(function_label("f3") == "function:f3");
}
