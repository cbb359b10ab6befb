#pragma once

#include <string>
#include <utility>
#include <vector>

namespace kgperf {

/// One algorithm configuration as a flat list of (module, value) settings.
/// This is the interchange shape: the built-in DE enumerator produces it and
/// the config TSV reader reconstructs it, so externally generated
/// configuration spaces flow through the same path.
struct ConfigRecord {
  std::string id;      // e.g. alg:modDE_0017
  std::string family;  // e.g. modDE
  std::vector<std::pair<std::string, std::string>> modules;

  bool operator==(const ConfigRecord&) const = default;
};

struct ProblemRecord {
  std::string id;  // e.g. problem:f3_i2_d5
  std::string function;
  int instance_index = 0;
  int dimension = 0;
  std::string problem_class;

  bool operator==(const ProblemRecord&) const = default;
};

/// Median best target precision per budget for one (configuration,
/// problem-instance) pair. Budgets are kept in the order they were recorded.
struct PerformanceRecord {
  std::string config_id;
  std::string problem_id;
  std::vector<long> budgets;
  std::vector<double> median_precision;

  /// Throws DataError if the budget was never recorded.
  double precision_at(long budget) const;

  bool operator==(const PerformanceRecord&) const = default;
};

// Performance CSV: header `config_id,problem_id,budget,median_precision`,
// one row per (config, problem, budget).
void write_performance_csv(const std::string& path,
                           const std::vector<PerformanceRecord>& records);
std::vector<PerformanceRecord> read_performance_csv(const std::string& path);

// Config TSV: `config_id<TAB>module<TAB>value` rows, one per setting.
// On read, the family is derived from the id (`alg:modDE_0017` -> `modDE`).
void write_config_tsv(const std::string& path,
                      const std::vector<ConfigRecord>& configs);
std::vector<ConfigRecord> read_config_tsv(const std::string& path);

// Problems CSV: header `problem_id,function,instance,dimension,class`.
void write_problems_csv(const std::string& path,
                        const std::vector<ProblemRecord>& problems);
std::vector<ProblemRecord> read_problems_csv(const std::string& path);

std::string family_from_config_id(const std::string& id);

}  // namespace kgperf
