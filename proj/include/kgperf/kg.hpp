#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "kgperf/ela.hpp"
#include "kgperf/records.hpp"

namespace kgperf {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;

struct Triple {
  EntityId head = 0;
  RelationId rel = 0;
  EntityId tail = 0;

  bool operator==(const Triple&) const = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const;
};

struct TransparentHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const {
    return std::hash<std::string_view>{}(s);
  }
};
struct TransparentEq {
  using is_transparent = void;
  bool operator()(std::string_view a, std::string_view b) const { return a == b; }
};

/// Bijective label <-> dense id mapping. Labels must be nonempty and free of
/// tabs and line breaks; spaces are allowed (module values contain them).
class Vocabulary {
 public:
  std::uint32_t intern(std::string_view label);
  std::optional<std::uint32_t> find(std::string_view label) const;
  const std::string& label(std::uint32_t id) const;
  std::uint32_t size() const { return static_cast<std::uint32_t>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::uint32_t, TransparentHash, TransparentEq>
      index_;
};

/// Directed labeled multigraph with set semantics on triples. Entities and
/// relations live in separate vocabularies.
class KnowledgeGraph {
 public:
  EntityId entity(std::string_view label) { return vocab_.intern(label); }
  RelationId relation(std::string_view label) { return relations_.intern(label); }

  /// Inserts if absent; returns false on duplicate.
  bool add(Triple t);
  bool add(std::string_view head, std::string_view rel, std::string_view tail);
  bool contains(const Triple& t) const { return member_.count(t) > 0; }

  const std::vector<Triple>& triples() const { return triples_; }
  const Vocabulary& entities() const { return vocab_; }
  const Vocabulary& relation_names() const { return relations_; }
  Vocabulary& entities() { return vocab_; }

  std::span<const std::uint32_t> with_relation(RelationId r) const;
  std::span<const std::uint32_t> with_head_relation(EntityId h, RelationId r) const;

 private:
  Vocabulary vocab_;
  Vocabulary relations_;
  std::vector<Triple> triples_;
  std::unordered_set<Triple, TripleHash> member_;
  std::vector<std::vector<std::uint32_t>> by_relation_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_head_rel_;
};

/// The fixed relation set. Resolving against a graph interns all seven names
/// so every graph shares the same relation ids regardless of build order.
struct Schema {
  RelationId solved = 0;
  RelationId not_solved = 0;
  RelationId has_module_setting = 0;
  RelationId is_configuration_of = 0;
  RelationId instance_of_problem = 0;
  RelationId has_problem_class = 0;
  RelationId has_feature_bin = 0;

  static Schema resolve(KnowledgeGraph& kg);
  bool is_performance(RelationId r) const { return r == solved || r == not_solved; }
};

// Canonical entity labels.
std::string problem_label(std::string_view function, int instance, int dimension);
std::string config_label(std::string_view family, int index);
std::string module_label(std::string_view module, std::string_view value);
std::string feature_bin_label(std::string_view feature, int bin);
std::string class_label(std::string_view problem_class);
std::string family_label(std::string_view family);
std::string function_label(std::string_view function);

/// Assembles the full graph: per-config module and family edges, per-problem
/// function, class, and feature-bin edges, and exactly one performance edge
/// per (config, problem) pair. A pair is solved when its median precision at
/// `budget` is at or below `threshold`. Missing performance rows, missing
/// feature rows, or performance rows naming unknown configs or problems are
/// data errors.
KnowledgeGraph build_kg(const std::vector<ConfigRecord>& configs,
                        const std::vector<ProblemRecord>& problems,
                        const ela::BinnedFeatureTable& features,
                        const std::vector<PerformanceRecord>& perf,
                        long budget, double threshold);

/// TSV `head<TAB>relation<TAB>tail`, one triple per line, lexicographically
/// sorted. Deserialization rejects malformed lines and duplicates with the
/// offending line number.
std::string serialize_kg(const KnowledgeGraph& kg);
KnowledgeGraph deserialize_kg(const std::string& text, const std::string& where);

void write_kg(const std::string& path, const KnowledgeGraph& kg);
KnowledgeGraph read_kg(const std::string& path);

/// `label<TAB>kind` rows, entities first then relations, in id order.
std::string serialize_vocabulary(const KnowledgeGraph& kg);

/// Throws DataError if any (head, tail) pair carries both performance edges.
void check_performance_exclusive(const KnowledgeGraph& kg, const Schema& schema);

std::vector<Triple> performance_triples(const KnowledgeGraph& kg,
                                        const Schema& schema);

/// Set equality on label triples; insertion order and id assignment may differ.
bool kg_equivalent(const KnowledgeGraph& a, const KnowledgeGraph& b);

}  // namespace kgperf
