#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kgperf/kg.hpp"

namespace kgperf {

struct SplitTriples {
  std::vector<Triple> train, val, test;
};

/// 60:20:20 per performance class, shuffled per class, allocation by largest
/// remainder so each part's class count is within one of proportionality.
/// A class with no triples at all is a stratification error.
SplitTriples split_random_stratified(std::span<const Triple> perf,
                                     RelationId solved, RelationId not_solved,
                                     std::uint64_t seed);

/// Problem identity for the leave-instances protocol.
struct ProblemKey {
  EntityId id = 0;
  std::string function;
  int instance = 0;
};

/// Fold f of m (m = shared instance count per function): test takes the f-th
/// smallest instance index, validation the cyclically next one, training the
/// rest. Functions with differing instance sets are a data error.
SplitTriples split_leave_instances_out(std::span<const Triple> perf,
                                       std::span<const ProblemKey> problems,
                                       int fold);

/// Number of folds the problem set supports (the shared instance count).
int leave_instances_fold_count(std::span<const ProblemKey> problems);

/// Configurations (performance-edge heads) split 60:20:20 uniformly at
/// random; every triple follows its head, so no configuration straddles
/// parts. Needs at least 5 distinct configurations.
SplitTriples split_leave_configs_out(std::span<const Triple> perf,
                                     std::uint64_t seed);

}  // namespace kgperf
