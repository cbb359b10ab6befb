#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kgperf/problems.hpp"
#include "kgperf/records.hpp"

namespace kgperf {

enum class MutationBase { rand, best, target };
enum class MutationReference { none, pbest, best, rand };
enum class CrossoverKind { bin, exp };
enum class Adaptation { none, shade, jde };

/// One point in the differential-evolution module space plus its scalar
/// hyperparameters. pop0 == 0 means 10 * dimension, resolved at run time.
struct ModdeConfig {
  MutationBase mutation_base = MutationBase::rand;
  MutationReference mutation_reference = MutationReference::none;
  int mutation_n_comps = 1;
  bool use_archive = false;
  CrossoverKind crossover = CrossoverKind::bin;
  Adaptation adaptation = Adaptation::none;
  bool lpsr = false;

  double f0 = 0.5;
  double cr0 = 0.9;
  int pop0 = 0;
  double pbest_rate = 0.1;

  void validate() const;
  int initial_population(int dimension) const {
    return pop0 > 0 ? pop0 : 10 * dimension;
  }

  /// Parses the seven module values from a ConfigRecord; scalars keep their
  /// current values. Unknown modules or values are configuration errors.
  static ModdeConfig from_record(const ConfigRecord& record);
};

/// Module names paired with their value lists; the enumeration order of a
/// Cartesian product follows this list with the rightmost module varying
/// fastest.
using ModuleSpace = std::vector<std::pair<std::string, std::vector<std::string>>>;

ModuleSpace modde_module_space();   // 3*4*2*2*2*3*2 = 576 configurations
ModuleSpace modcma_module_space();  // 2*3*3*3*3*2 = 324 configurations

std::vector<ConfigRecord> enumerate_configs(std::string_view family,
                                            const ModuleSpace& space);

/// Runs one fixed-budget optimization. Returns the best-so-far precision
/// after each evaluation; the result has exactly `budget` entries and is
/// non-increasing. Identical (config, problem, seed) yields identical output.
///
/// Per generation, against a snapshot of the previous population: draw
/// parameters (constant / jde / shade), pick the base vector, add the
/// optional reference term F*(x_ref - x_base), add n_comps difference terms
/// F*(x_r - x_s) over pairwise-distinct indices (s may come from the archive),
/// clamp to the box, cross over (binomial or exponential), then select
/// greedily. Replaced parents enter the archive on strict improvement.
/// When an exclusion set leaves no candidate index the draw falls back to
/// excluding only the target, and as a last resort to no exclusion.
std::vector<double> run_modde(const ModdeConfig& config, const Problem& problem,
                              long budget, std::uint64_t seed);

/// Run result plus counters that make the harness contract observable:
/// exact evaluation count, the population size after the last generation,
/// and the range of mutation factors and crossover rates actually applied.
/// Runs that never reach a generation leave the ranges empty (min > max).
struct RunStats {
  std::vector<double> trajectory;
  long evaluations = 0;
  int final_population = 0;
  double f_min = 1e300, f_max = -1e300;
  double cr_min = 1e300, cr_max = -1e300;
};

RunStats run_modde_stats(const ModdeConfig& config, const Problem& problem,
                         long budget, std::uint64_t seed);

/// Medians over `runs` independent runs per (config, problem) at each budget.
/// runs must be odd so the median is an achieved value. Run seeds derive from
/// (base_seed, config id, problem id, run index) only, so the schedule is
/// order-independent and parallelizable.
std::vector<PerformanceRecord> collect_performance(
    const std::vector<ConfigRecord>& configs,
    const std::vector<ModdeConfig>& parsed,
    const std::vector<Problem>& problems, std::vector<long> budgets, int runs,
    std::uint64_t base_seed, int threads);

}  // namespace kgperf
