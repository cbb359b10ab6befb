#include "kgperf/splits.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <unordered_map>

#include "kgperf/errors.hpp"
#include "kgperf/rng.hpp"

namespace kgperf {
namespace {

constexpr std::array<int, 3> kRatios = {60, 20, 20};

/// Largest-remainder allocation of n items to the 60:20:20 parts; remainder
/// ties go to the earlier part.
std::array<std::size_t, 3> allocate(std::size_t n) {
  std::array<std::size_t, 3> base{};
  std::array<double, 3> frac{};
  std::size_t assigned = 0;
  for (int p = 0; p < 3; ++p) {
    double share = static_cast<double>(n) * kRatios[p] / 100.0;
    base[p] = static_cast<std::size_t>(share);
    frac[p] = share - static_cast<double>(base[p]);
    assigned += base[p];
  }
  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return frac[a] > frac[b]; });
  for (std::size_t left = n - assigned, i = 0; left > 0; --left, ++i)
    ++base[order[i % 3]];
  return base;
}

void distribute(std::vector<Triple>& items, Rng& rng, SplitTriples& out) {
  rng.shuffle(items);
  auto counts = allocate(items.size());
  std::size_t at = 0;
  for (std::size_t i = 0; i < counts[0]; ++i) out.train.push_back(items[at++]);
  for (std::size_t i = 0; i < counts[1]; ++i) out.val.push_back(items[at++]);
  for (std::size_t i = 0; i < counts[2]; ++i) out.test.push_back(items[at++]);
}

}  // namespace

SplitTriples split_random_stratified(std::span<const Triple> perf,
                                     RelationId solved, RelationId not_solved,
                                     std::uint64_t seed) {
  std::vector<Triple> pos, neg;
  for (const auto& t : perf) {
    if (t.rel == solved) pos.push_back(t);
    else if (t.rel == not_solved) neg.push_back(t);
    else throw DataError("stratified split: non-performance triple");
  }
  if (pos.empty() || neg.empty())
    throw DataError("stratified split: a performance class is absent");

  SplitTriples out;
  Rng rng(seed);
  distribute(pos, rng, out);
  distribute(neg, rng, out);
  return out;
}

int leave_instances_fold_count(std::span<const ProblemKey> problems) {
  if (problems.empty()) throw DataError("leave-instances split: no problems");
  std::map<std::string, std::set<int>> per_function;
  for (const auto& p : problems) per_function[p.function].insert(p.instance);
  const auto& first = per_function.begin()->second;
  for (const auto& [fn, instances] : per_function)
    if (instances != first)
      throw DataError("leave-instances split: function " + fn +
                      " has a different instance set");
  return static_cast<int>(first.size());
}

SplitTriples split_leave_instances_out(std::span<const Triple> perf,
                                       std::span<const ProblemKey> problems,
                                       int fold) {
  int m = leave_instances_fold_count(problems);
  if (fold < 0 || fold >= m) throw ConfigError("fold index out of range");

  std::set<int> instance_values;
  for (const auto& p : problems) instance_values.insert(p.instance);
  std::vector<int> ordered(instance_values.begin(), instance_values.end());
  int test_instance = ordered[fold];
  int val_instance = ordered[(fold + 1) % m];

  std::unordered_map<EntityId, int> instance_of;
  for (const auto& p : problems) instance_of.emplace(p.id, p.instance);

  SplitTriples out;
  for (const auto& t : perf) {
    auto it = instance_of.find(t.tail);
    if (it == instance_of.end())
      throw DataError("leave-instances split: performance edge to a problem "
                      "without instance info");
    if (it->second == test_instance) out.test.push_back(t);
    else if (it->second == val_instance) out.val.push_back(t);
    else out.train.push_back(t);
  }
  return out;
}

SplitTriples split_leave_configs_out(std::span<const Triple> perf,
                                     std::uint64_t seed) {
  std::vector<EntityId> configs;
  {
    std::set<EntityId> heads;
    for (const auto& t : perf) heads.insert(t.head);
    configs.assign(heads.begin(), heads.end());
  }
  if (configs.size() < 5)
    throw DataError("leave-configs split needs at least 5 configurations");

  Rng rng(seed);
  rng.shuffle(configs);
  auto counts = allocate(configs.size());
  // part_of: 0 train, 1 val, 2 test
  std::unordered_map<EntityId, int> part_of;
  std::size_t at = 0;
  for (int part = 0; part < 3; ++part)
    for (std::size_t i = 0; i < counts[part]; ++i)
      part_of.emplace(configs[at++], part);

  SplitTriples out;
  for (const auto& t : perf) {
    switch (part_of.at(t.head)) {
      case 0: out.train.push_back(t); break;
      case 1: out.val.push_back(t); break;
      default: out.test.push_back(t); break;
    }
  }
  return out;
}

}  // namespace kgperf
