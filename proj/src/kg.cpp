#include "kgperf/kg.hpp"

#include <algorithm>
#include <cstdio>

#include "kgperf/errors.hpp"
#include "kgperf/io.hpp"
#include "kgperf/rng.hpp"

namespace kgperf {
namespace {

void validate_label(std::string_view label) {
  if (label.empty()) throw DataError("empty label");
  if (label.find_first_of("\t\r\n") != std::string_view::npos)
    throw DataError("label contains tab or line break: " + std::string(label));
}

std::string two_digit(int v) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%02d", v);
  return buf;
}

}  // namespace

std::size_t TripleHash::operator()(const Triple& t) const {
  std::uint64_t x = mix64(t.head ^ (static_cast<std::uint64_t>(t.rel) << 32));
  return static_cast<std::size_t>(mix64(x ^ t.tail));
}

std::uint32_t Vocabulary::intern(std::string_view label) {
  if (auto it = index_.find(label); it != index_.end()) return it->second;
  validate_label(label);
  std::uint32_t id = size();
  labels_.emplace_back(label);
  index_.emplace(labels_.back(), id);
  return id;
}

std::optional<std::uint32_t> Vocabulary::find(std::string_view label) const {
  if (auto it = index_.find(label); it != index_.end()) return it->second;
  return std::nullopt;
}

const std::string& Vocabulary::label(std::uint32_t id) const {
  if (id >= labels_.size()) throw DataError("vocabulary id out of range");
  return labels_[id];
}

bool KnowledgeGraph::add(Triple t) {
  if (t.head >= vocab_.size() || t.tail >= vocab_.size() ||
      t.rel >= relations_.size())
    throw DataError("triple references unknown id");
  if (!member_.insert(t).second) return false;
  std::uint32_t idx = static_cast<std::uint32_t>(triples_.size());
  triples_.push_back(t);
  if (by_relation_.size() <= t.rel) by_relation_.resize(t.rel + 1);
  by_relation_[t.rel].push_back(idx);
  by_head_rel_[(static_cast<std::uint64_t>(t.head) << 32) | t.rel].push_back(idx);
  return true;
}

bool KnowledgeGraph::add(std::string_view head, std::string_view rel,
                         std::string_view tail) {
  return add({entity(head), relation(rel), entity(tail)});
}

std::span<const std::uint32_t> KnowledgeGraph::with_relation(RelationId r) const {
  if (r >= by_relation_.size()) return {};
  return by_relation_[r];
}

std::span<const std::uint32_t> KnowledgeGraph::with_head_relation(
    EntityId h, RelationId r) const {
  auto it = by_head_rel_.find((static_cast<std::uint64_t>(h) << 32) | r);
  if (it == by_head_rel_.end()) return {};
  return it->second;
}

Schema Schema::resolve(KnowledgeGraph& kg) {
  Schema s;
  s.solved = kg.relation("solved");
  s.not_solved = kg.relation("not_solved");
  s.has_module_setting = kg.relation("has_module_setting");
  s.is_configuration_of = kg.relation("is_configuration_of");
  s.instance_of_problem = kg.relation("instance_of_problem");
  s.has_problem_class = kg.relation("has_problem_class");
  s.has_feature_bin = kg.relation("has_feature_bin");
  return s;
}

std::string problem_label(std::string_view function, int instance, int dimension) {
  std::string s = "problem:";
  s += function;
  s += "_i" + std::to_string(instance);
  s += "_d" + std::to_string(dimension);
  return s;
}

std::string config_label(std::string_view family, int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d", index);
  std::string s = "alg:";
  s += family;
  s += '_';
  s += buf;
  return s;
}

std::string module_label(std::string_view module, std::string_view value) {
  std::string s = "module:";
  s += module;
  s += '=';
  s += value;
  return s;
}

std::string feature_bin_label(std::string_view feature, int bin) {
  std::string s = "feature:";
  s += feature;
  s += "_bin_";
  s += two_digit(bin);
  return s;
}

std::string class_label(std::string_view problem_class) {
  return "class:" + std::string(problem_class);
}

std::string family_label(std::string_view family) {
  return "family:" + std::string(family);
}

std::string function_label(std::string_view function) {
  return "function:" + std::string(function);
}

KnowledgeGraph build_kg(const std::vector<ConfigRecord>& configs,
                        const std::vector<ProblemRecord>& problems,
                        const ela::BinnedFeatureTable& features,
                        const std::vector<PerformanceRecord>& perf,
                        long budget, double threshold) {
  if (configs.empty()) throw DataError("no configurations");
  if (problems.empty()) throw DataError("no problems");

  KnowledgeGraph kg;
  Schema schema = Schema::resolve(kg);

  for (const auto& c : configs) {
    EntityId ce = kg.entity(c.id);
    kg.add({ce, schema.is_configuration_of, kg.entity(family_label(c.family))});
    for (const auto& [module, value] : c.modules)
      kg.add({ce, schema.has_module_setting,
              kg.entity(module_label(module, value))});
  }

  if (features.features.size() != features.ranges.size())
    throw DataError("feature table: range count mismatch");
  for (const auto& p : problems) {
    EntityId pe = kg.entity(p.id);
    kg.add({pe, schema.instance_of_problem,
            kg.entity(function_label(p.function))});
    kg.add({pe, schema.has_problem_class,
            kg.entity(class_label(p.problem_class))});
    auto row = features.row_of(p.id);
    if (!row) throw DataError("no features for problem " + p.id);
    for (std::size_t j = 0; j < features.features.size(); ++j)
      kg.add({pe, schema.has_feature_bin,
              kg.entity(feature_bin_label(features.features[j],
                                          features.bins[*row][j]))});
  }

  // Performance edges: require exactly one row per (config, problem) pair.
  std::unordered_map<std::string, std::uint32_t, TransparentHash, TransparentEq>
      cidx, pidx;
  for (std::uint32_t i = 0; i < configs.size(); ++i)
    if (!cidx.emplace(configs[i].id, i).second)
      throw DataError("duplicate configuration id " + configs[i].id);
  for (std::uint32_t i = 0; i < problems.size(); ++i)
    if (!pidx.emplace(problems[i].id, i).second)
      throw DataError("duplicate problem id " + problems[i].id);

  std::vector<bool> covered(configs.size() * problems.size(), false);
  for (const auto& r : perf) {
    auto ci = cidx.find(r.config_id);
    if (ci == cidx.end())
      throw DataError("performance row for unknown configuration " + r.config_id);
    auto pi = pidx.find(r.problem_id);
    if (pi == pidx.end())
      throw DataError("performance row for unknown problem " + r.problem_id);
    bool has_budget =
        std::find(r.budgets.begin(), r.budgets.end(), budget) != r.budgets.end();
    if (!has_budget)
      throw DataError("no precision at budget " + std::to_string(budget) +
                      " for " + r.config_id + " on " + r.problem_id);
    double prec = r.precision_at(budget);
    std::size_t slot =
        static_cast<std::size_t>(ci->second) * problems.size() + pi->second;
    if (covered[slot])
      throw DataError("duplicate performance pair " + r.config_id + " / " +
                      r.problem_id);
    covered[slot] = true;
    RelationId rel = prec <= threshold ? schema.solved : schema.not_solved;
    kg.add({kg.entity(r.config_id), rel, kg.entity(r.problem_id)});
  }
  for (std::size_t i = 0; i < covered.size(); ++i)
    if (!covered[i])
      throw DataError("missing performance pair " +
                      configs[i / problems.size()].id + " / " +
                      problems[i % problems.size()].id);
  return kg;
}

std::string serialize_kg(const KnowledgeGraph& kg) {
  std::vector<std::string> lines;
  lines.reserve(kg.triples().size());
  for (const auto& t : kg.triples()) {
    std::string line = kg.entities().label(t.head);
    line += '\t';
    line += kg.relation_names().label(t.rel);
    line += '\t';
    line += kg.entities().label(t.tail);
    lines.push_back(std::move(line));
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

KnowledgeGraph deserialize_kg(const std::string& text, const std::string& where) {
  KnowledgeGraph kg;
  Schema::resolve(kg);
  auto lines = io::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto fields = io::split(lines[i], '\t');
    std::string ctx = where + " line " + std::to_string(i + 1);
    if (fields.size() != 3) throw DataError(ctx + ": expected 3 fields");
    for (auto f : fields)
      if (f.empty()) throw DataError(ctx + ": empty field");
    if (!kg.add(fields[0], fields[1], fields[2]))
      throw DataError(ctx + ": duplicate triple");
  }
  return kg;
}

void write_kg(const std::string& path, const KnowledgeGraph& kg) {
  io::write_file(path, serialize_kg(kg));
}

KnowledgeGraph read_kg(const std::string& path) {
  return deserialize_kg(io::read_file(path), path);
}

std::string serialize_vocabulary(const KnowledgeGraph& kg) {
  std::string out;
  for (const auto& l : kg.entities().labels()) {
    out += l;
    out += "\tentity\n";
  }
  for (const auto& l : kg.relation_names().labels()) {
    out += l;
    out += "\trelation\n";
  }
  return out;
}

void check_performance_exclusive(const KnowledgeGraph& kg, const Schema& schema) {
  for (auto idx : kg.with_relation(schema.solved)) {
    const Triple& t = kg.triples()[idx];
    if (kg.contains({t.head, schema.not_solved, t.tail}))
      throw DataError("pair has both performance edges: " +
                      kg.entities().label(t.head) + " / " +
                      kg.entities().label(t.tail));
  }
}

std::vector<Triple> performance_triples(const KnowledgeGraph& kg,
                                        const Schema& schema) {
  std::vector<Triple> out;
  for (auto idx : kg.with_relation(schema.solved)) out.push_back(kg.triples()[idx]);
  for (auto idx : kg.with_relation(schema.not_solved))
    out.push_back(kg.triples()[idx]);
  return out;
}

bool kg_equivalent(const KnowledgeGraph& a, const KnowledgeGraph& b) {
  if (a.triples().size() != b.triples().size()) return false;
  for (const auto& t : a.triples()) {
    auto h = b.entities().find(a.entities().label(t.head));
    auto r = b.relation_names().find(a.relation_names().label(t.rel));
    auto tl = b.entities().find(a.entities().label(t.tail));
    if (!h || !r || !tl || !b.contains({*h, *r, *tl})) return false;
  }
  return true;
}

}  // namespace kgperf
