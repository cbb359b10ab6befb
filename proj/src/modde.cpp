#include "kgperf/modde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kgperf/errors.hpp"
#include "kgperf/io.hpp"
#include "kgperf/kg.hpp"
#include "kgperf/parallel.hpp"
#include "kgperf/rng.hpp"

namespace kgperf {
namespace {

constexpr int kShadeMemory = 6;
constexpr double kTau = 0.1;

template <typename E>
E parse_enum(std::string_view value,
             std::initializer_list<std::pair<std::string_view, E>> table,
             std::string_view module) {
  for (const auto& [name, e] : table)
    if (name == value) return e;
  throw ConfigError("bad value for module " + std::string(module) + ": " +
                    std::string(value));
}

bool parse_bool(std::string_view value, std::string_view module) {
  return parse_enum<bool>(value, {{"true", true}, {"false", false}}, module);
}

struct Individual {
  std::vector<double> x;
  double f = 0;
  double cf = 0.5;  // per-individual F (jde)
  double ccr = 0.9; // per-individual CR (jde)
};

/// Uniform index in [0, n) excluding the values in `excl` (in-range entries
/// only). Returns -1 when nothing remains.
int draw_excluding(Rng& rng, int n, std::vector<int> excl) {
  std::sort(excl.begin(), excl.end());
  excl.erase(std::unique(excl.begin(), excl.end()), excl.end());
  while (!excl.empty() && excl.back() >= n) excl.pop_back();
  int m = n - static_cast<int>(excl.size());
  if (m <= 0) return -1;
  int k = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(m)));
  for (int e : excl)
    if (k >= e) ++k;
  return k;
}

/// draw_excluding with the documented fallback chain: full exclusion set,
/// then only the target index, then no exclusion.
int draw_index(Rng& rng, int n, const std::vector<int>& excl, int target) {
  int k = draw_excluding(rng, n, excl);
  if (k >= 0) return k;
  k = draw_excluding(rng, n, {target});
  if (k >= 0) return k;
  return static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)));
}

int best_index(const std::vector<Individual>& pop) {
  int b = 0;
  for (int i = 1; i < static_cast<int>(pop.size()); ++i)
    if (pop[i].f < pop[b].f) b = i;
  return b;
}

double lehmer_mean(const std::vector<double>& values,
                  const std::vector<double>& weights, double fallback) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    num += weights[i] * values[i] * values[i];
    den += weights[i] * values[i];
  }
  if (den == 0) return fallback;
  return num / den;
}

}  // namespace

void ModdeConfig::validate() const {
  if (mutation_n_comps < 1 || mutation_n_comps > 2)
    throw ConfigError("mutation_n_comps must be 1 or 2");
  if (!(f0 > 0 && f0 <= 2)) throw ConfigError("F0 must be in (0, 2]");
  if (!(cr0 >= 0 && cr0 <= 1)) throw ConfigError("CR0 must be in [0, 1]");
  if (pop0 < 0) throw ConfigError("pop0 must be nonnegative");
  if (!(pbest_rate > 0 && pbest_rate <= 1))
    throw ConfigError("pbest_rate must be in (0, 1]");
}

ModdeConfig ModdeConfig::from_record(const ConfigRecord& record) {
  ModdeConfig c;
  bool seen[7] = {};
  for (const auto& [module, value] : record.modules) {
    if (module == "mutation_base") {
      c.mutation_base = parse_enum<MutationBase>(
          value,
          {{"rand", MutationBase::rand},
           {"best", MutationBase::best},
           {"target", MutationBase::target}},
          module);
      seen[0] = true;
    } else if (module == "mutation_reference") {
      c.mutation_reference = parse_enum<MutationReference>(
          value,
          {{"none", MutationReference::none},
           {"pbest", MutationReference::pbest},
           {"best", MutationReference::best},
           {"rand", MutationReference::rand}},
          module);
      seen[1] = true;
    } else if (module == "mutation_n_comps") {
      c.mutation_n_comps =
          static_cast<int>(io::parse_long(value, "mutation_n_comps"));
      seen[2] = true;
    } else if (module == "use_archive") {
      c.use_archive = parse_bool(value, module);
      seen[3] = true;
    } else if (module == "crossover") {
      c.crossover = parse_enum<CrossoverKind>(
          value, {{"bin", CrossoverKind::bin}, {"exp", CrossoverKind::exp}},
          module);
      seen[4] = true;
    } else if (module == "adaptation_method") {
      c.adaptation = parse_enum<Adaptation>(
          value,
          {{"none", Adaptation::none},
           {"shade", Adaptation::shade},
           {"jde", Adaptation::jde}},
          module);
      seen[5] = true;
    } else if (module == "lpsr") {
      c.lpsr = parse_bool(value, module);
      seen[6] = true;
    } else {
      throw ConfigError("unknown module " + module + " in " + record.id);
    }
  }
  for (bool s : seen)
    if (!s) throw ConfigError("incomplete module set in " + record.id);
  c.validate();
  return c;
}

ModuleSpace modde_module_space() {
  return {
      {"mutation_base", {"rand", "best", "target"}},
      {"mutation_reference", {"none", "pbest", "best", "rand"}},
      {"mutation_n_comps", {"1", "2"}},
      {"use_archive", {"true", "false"}},
      {"crossover", {"bin", "exp"}},
      {"adaptation_method", {"none", "shade", "jde"}},
      {"lpsr", {"true", "false"}},
  };
}

ModuleSpace modcma_module_space() {
  return {
      {"elitist", {"true", "false"}},
      {"mirrored_sampling", {"none", "mirrored", "mirrored pairwise"}},
      {"base_sampler", {"gaussian", "sobol", "halton"}},
      {"weights_option", {"default", "equal", "1/2^lambda"}},
      {"local_restart", {"none", "IPOP", "BIPOP"}},
      {"step_size_adaptation", {"csa", "psr"}},
  };
}

std::vector<ConfigRecord> enumerate_configs(std::string_view family,
                                            const ModuleSpace& space) {
  if (space.empty()) throw ConfigError("empty module space");
  std::size_t total = 1;
  for (const auto& [name, values] : space) {
    if (values.empty())
      throw ConfigError("module " + name + " has no values");
    total *= values.size();
  }
  std::vector<ConfigRecord> out;
  out.reserve(total);
  std::vector<std::size_t> odo(space.size(), 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    ConfigRecord r;
    r.id = config_label(family, static_cast<int>(idx));
    r.family = family;
    for (std::size_t m = 0; m < space.size(); ++m)
      r.modules.emplace_back(space[m].first, space[m].second[odo[m]]);
    out.push_back(std::move(r));
    for (std::size_t m = space.size(); m-- > 0;) {
      if (++odo[m] < space[m].second.size()) break;
      odo[m] = 0;
    }
  }
  return out;
}

RunStats run_modde_stats(const ModdeConfig& config, const Problem& problem,
                         long budget, std::uint64_t seed) {
  config.validate();
  const int dim = problem.dimension();
  const int pop0 = config.initial_population(dim);
  if (budget < pop0)
    throw ConfigError("budget " + std::to_string(budget) +
                      " below initial population " + std::to_string(pop0));

  Rng rng(seed);
  RunStats stats;
  std::vector<double>& traj = stats.trajectory;
  traj.reserve(budget);
  long evals = 0;
  double best_f = std::numeric_limits<double>::infinity();

  auto evaluate = [&](const std::vector<double>& x) {
    double f = problem.evaluate(x);
    ++evals;
    best_f = std::min(best_f, f);
    traj.push_back(best_f);
    return f;
  };

  std::vector<Individual> pop(pop0);
  for (auto& ind : pop) {
    ind.x.resize(dim);
    for (double& v : ind.x) v = rng.uniform(kDomainLo, kDomainHi);
    ind.f = evaluate(ind.x);
    ind.cf = config.f0;
    ind.ccr = config.cr0;
  }

  std::vector<std::vector<double>> archive;
  std::vector<double> mem_f(kShadeMemory, 0.5), mem_cr(kShadeMemory, 0.5);
  int mem_pos = 0;

  // Shrinks the population toward 4 members linearly in spent budget,
  // dropping the worst first; the archive follows the new capacity.
  auto apply_lpsr = [&] {
    if (!config.lpsr) return;
    long target = std::lround(static_cast<double>(pop0) +
                              (4.0 - pop0) * static_cast<double>(evals) /
                                  static_cast<double>(budget));
    target = std::max<long>(4, target);
    target = std::min<long>(target, static_cast<long>(pop.size()));
    while (static_cast<long>(pop.size()) > target) {
      int worst = 0;
      for (int i = 1; i < static_cast<int>(pop.size()); ++i)
        if (pop[i].f > pop[worst].f) worst = i;
      pop.erase(pop.begin() + worst);
    }
    while (archive.size() > pop.size())
      archive.erase(archive.begin() + static_cast<std::ptrdiff_t>(
                                          rng.uniform_index(archive.size())));
  };
  apply_lpsr();

  std::vector<double> succ_f, succ_cr, succ_w;

  while (evals < budget) {
    const std::vector<Individual> prev = pop;
    const int n = static_cast<int>(prev.size());
    const int best = best_index(prev);

    // Rank order for pbest: ascending objective, ties by index.
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return prev[a].f < prev[b].f; });
    const int top =
        std::max(1, static_cast<int>(std::ceil(config.pbest_rate * n)));

    succ_f.clear();
    succ_cr.clear();
    succ_w.clear();

    for (int i = 0; i < n && evals < budget; ++i) {
      double cf = config.f0, ccr = config.cr0;
      switch (config.adaptation) {
        case Adaptation::none:
          break;
        case Adaptation::jde:
          cf = rng.uniform() < kTau ? rng.uniform(0.1, 1.0) : prev[i].cf;
          ccr = rng.uniform() < kTau ? rng.uniform(0.0, 1.0) : prev[i].ccr;
          break;
        case Adaptation::shade: {
          int r = static_cast<int>(rng.uniform_index(kShadeMemory));
          do {
            cf = rng.cauchy(mem_f[r], 0.1);
          } while (cf <= 0);
          cf = std::min(cf, 1.0);
          ccr = std::clamp(rng.normal(mem_cr[r], 0.1), 0.0, 1.0);
          break;
        }
      }

      std::vector<int> used = {i};
      int base = i;
      switch (config.mutation_base) {
        case MutationBase::rand:
          base = draw_index(rng, n, used, i);
          break;
        case MutationBase::best:
          base = best;
          break;
        case MutationBase::target:
          base = i;
          break;
      }
      used.push_back(base);

      std::vector<double> donor = prev[base].x;

      if (config.mutation_reference != MutationReference::none) {
        int ref;
        switch (config.mutation_reference) {
          case MutationReference::pbest:
            ref = order[static_cast<int>(rng.uniform_index(top))];
            break;
          case MutationReference::best:
            ref = best;
            break;
          default:
            ref = draw_index(rng, n, used, i);
            break;
        }
        used.push_back(ref);
        for (int d = 0; d < dim; ++d)
          donor[d] += cf * (prev[ref].x[d] - prev[base].x[d]);
      }

      for (int comp = 0; comp < config.mutation_n_comps; ++comp) {
        int r = draw_index(rng, n, used, i);
        used.push_back(r);
        const std::vector<double>* xs;
        if (config.use_archive && !archive.empty()) {
          // Second operand comes from the union of the remaining population
          // and the archive, uniformly.
          std::vector<int> excl = used;
          std::sort(excl.begin(), excl.end());
          excl.erase(std::unique(excl.begin(), excl.end()), excl.end());
          int pool_pop = n - static_cast<int>(excl.size());
          if (pool_pop < 0) pool_pop = 0;
          std::uint64_t pool =
              static_cast<std::uint64_t>(pool_pop) + archive.size();
          std::uint64_t pick = rng.uniform_index(pool);
          if (pick < static_cast<std::uint64_t>(pool_pop)) {
            int k = static_cast<int>(pick);
            for (int e : excl)
              if (k >= e) ++k;
            used.push_back(k);
            xs = &prev[k].x;
          } else {
            xs = &archive[pick - pool_pop];
          }
        } else {
          int s = draw_index(rng, n, used, i);
          used.push_back(s);
          xs = &prev[s].x;
        }
        for (int d = 0; d < dim; ++d)
          donor[d] += cf * (prev[r].x[d] - (*xs)[d]);
      }

      stats.f_min = std::min(stats.f_min, cf);
      stats.f_max = std::max(stats.f_max, cf);
      stats.cr_min = std::min(stats.cr_min, ccr);
      stats.cr_max = std::max(stats.cr_max, ccr);

      for (double& v : donor) v = std::clamp(v, kDomainLo, kDomainHi);

      std::vector<double> trial = prev[i].x;
      if (config.crossover == CrossoverKind::bin) {
        int forced = static_cast<int>(rng.uniform_index(dim));
        for (int d = 0; d < dim; ++d)
          if (d == forced || rng.uniform() < ccr) trial[d] = donor[d];
      } else {
        int start = static_cast<int>(rng.uniform_index(dim));
        int len = 1;
        while (len < dim && rng.uniform() < ccr) ++len;
        for (int k = 0; k < len; ++k) trial[(start + k) % dim] = donor[(start + k) % dim];
      }

      double ft = evaluate(trial);
      if (ft <= prev[i].f) {
        if (ft < prev[i].f) {
          if (config.use_archive) {
            if (archive.size() < pop.size()) {
              archive.push_back(prev[i].x);
            } else if (!archive.empty()) {
              archive[rng.uniform_index(archive.size())] = prev[i].x;
            }
          }
          succ_f.push_back(cf);
          succ_cr.push_back(ccr);
          succ_w.push_back(prev[i].f - ft);
        }
        pop[i].x = std::move(trial);
        pop[i].f = ft;
        pop[i].cf = cf;
        pop[i].ccr = ccr;
      } else {
        pop[i] = prev[i];
      }
    }

    if (config.adaptation == Adaptation::shade && !succ_f.empty()) {
      double wsum = 0;
      for (double w : succ_w) wsum += w;
      if (wsum > 0)
        for (double& w : succ_w) w /= wsum;
      mem_f[mem_pos] = lehmer_mean(succ_f, succ_w, mem_f[mem_pos]);
      mem_cr[mem_pos] = lehmer_mean(succ_cr, succ_w, mem_cr[mem_pos]);
      mem_pos = (mem_pos + 1) % kShadeMemory;
    }

    apply_lpsr();
  }

  stats.evaluations = evals;
  stats.final_population = static_cast<int>(pop.size());
  return stats;
}

std::vector<double> run_modde(const ModdeConfig& config, const Problem& problem,
                              long budget, std::uint64_t seed) {
  return run_modde_stats(config, problem, budget, seed).trajectory;
}

std::vector<PerformanceRecord> collect_performance(
    const std::vector<ConfigRecord>& configs,
    const std::vector<ModdeConfig>& parsed,
    const std::vector<Problem>& problems, std::vector<long> budgets, int runs,
    std::uint64_t base_seed, int threads) {
  if (configs.size() != parsed.size())
    throw ConfigError("config record/parse count mismatch");
  if (runs < 1 || runs % 2 == 0)
    throw ConfigError("run count must be a positive odd number");
  if (budgets.empty()) throw ConfigError("no budgets given");
  std::sort(budgets.begin(), budgets.end());
  budgets.erase(std::unique(budgets.begin(), budgets.end()), budgets.end());
  if (budgets.front() < 1) throw ConfigError("budgets must be positive");
  const long horizon = budgets.back();

  std::vector<PerformanceRecord> records(configs.size() * problems.size());
  parallel_for(records.size(), threads, [&](std::size_t task) {
    std::size_t ci = task / problems.size();
    std::size_t pi = task % problems.size();
    PerformanceRecord& rec = records[task];
    rec.config_id = configs[ci].id;
    rec.problem_id = problems[pi].record().id;
    rec.budgets = budgets;

    std::vector<std::vector<double>> at_budget(budgets.size());
    for (int run = 0; run < runs; ++run) {
      std::uint64_t seed =
          derive_run_seed(base_seed, rec.config_id, rec.problem_id, run);
      auto traj = run_modde(parsed[ci], problems[pi], horizon, seed);
      for (std::size_t b = 0; b < budgets.size(); ++b)
        at_budget[b].push_back(traj[budgets[b] - 1]);
    }
    rec.median_precision.resize(budgets.size());
    for (std::size_t b = 0; b < budgets.size(); ++b) {
      auto& v = at_budget[b];
      std::sort(v.begin(), v.end());
      rec.median_precision[b] = v[v.size() / 2];
    }
  });
  return records;
}

}  // namespace kgperf
