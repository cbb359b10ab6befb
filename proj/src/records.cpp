#include "kgperf/records.hpp"

#include <map>
#include <sstream>

#include "kgperf/errors.hpp"
#include "kgperf/io.hpp"

namespace kgperf {

double PerformanceRecord::precision_at(long budget) const {
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    if (budgets[i] == budget) return median_precision[i];
  }
  throw DataError("no precision recorded at budget " + std::to_string(budget) +
                  " for (" + config_id + ", " + problem_id + ")");
}

std::string family_from_config_id(const std::string& id) {
  std::string s = id;
  if (s.rfind("alg:", 0) == 0) s = s.substr(4);
  const std::size_t pos = s.rfind('_');
  if (pos != std::string::npos && pos > 0) s = s.substr(0, pos);
  return s;
}

void write_performance_csv(const std::string& path,
                           const std::vector<PerformanceRecord>& records) {
  std::ostringstream out;
  out << "config_id,problem_id,budget,median_precision\n";
  for (const auto& r : records) {
    io::check_field(r.config_id, ',', path);
    io::check_field(r.problem_id, ',', path);
    if (r.budgets.size() != r.median_precision.size()) {
      throw DataError(path + ": record for (" + r.config_id + ", " +
                      r.problem_id + ") has mismatched budget/precision lists");
    }
    for (std::size_t i = 0; i < r.budgets.size(); ++i) {
      out << r.config_id << ',' << r.problem_id << ',' << r.budgets[i] << ','
          << io::format_double(r.median_precision[i]) << '\n';
    }
  }
  io::write_file(path, out.str());
}

std::vector<PerformanceRecord> read_performance_csv(const std::string& path) {
  const std::string contents = io::read_file(path);
  const auto lines = io::split_lines(contents);
  if (lines.empty() || lines[0] != "config_id,problem_id,budget,median_precision") {
    throw DataError(path + ": missing or wrong performance CSV header");
  }
  std::vector<PerformanceRecord> records;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const std::string where = path + ":" + std::to_string(n + 1);
    const auto fields = io::split(lines[n], ',');
    if (fields.size() != 4) {
      throw DataError(where + ": expected 4 comma-separated fields, got " +
                      std::to_string(fields.size()));
    }
    const std::string config(fields[0]);
    const std::string problem(fields[1]);
    if (config.empty() || problem.empty()) {
      throw DataError(where + ": empty id field");
    }
    const long budget = io::parse_long(fields[2], where);
    const double prec = io::parse_double(fields[3], where);
    const auto key = std::make_pair(config, problem);
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, records.size());
      records.push_back({config, problem, {budget}, {prec}});
    } else {
      auto& rec = records[it->second];
      for (long b : rec.budgets) {
        if (b == budget) {
          throw DataError(where + ": duplicate row for (" + config + ", " +
                          problem + ", " + std::to_string(budget) + ")");
        }
      }
      rec.budgets.push_back(budget);
      rec.median_precision.push_back(prec);
    }
  }
  return records;
}

void write_config_tsv(const std::string& path,
                      const std::vector<ConfigRecord>& configs) {
  std::ostringstream out;
  for (const auto& c : configs) {
    io::check_field(c.id, '\t', path);
    for (const auto& [module, value] : c.modules) {
      io::check_field(module, '\t', path);
      io::check_field(value, '\t', path);
      out << c.id << '\t' << module << '\t' << value << '\n';
    }
  }
  io::write_file(path, out.str());
}

std::vector<ConfigRecord> read_config_tsv(const std::string& path) {
  const std::string contents = io::read_file(path);
  const auto lines = io::split_lines(contents);
  std::vector<ConfigRecord> configs;
  std::map<std::string, std::size_t> index;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const std::string where = path + ":" + std::to_string(n + 1);
    const auto fields = io::split(lines[n], '\t');
    if (fields.size() != 3) {
      throw DataError(where + ": expected 3 tab-separated fields, got " +
                      std::to_string(fields.size()));
    }
    const std::string id(fields[0]);
    const std::string module(fields[1]);
    const std::string value(fields[2]);
    if (id.empty() || module.empty() || value.empty()) {
      throw DataError(where + ": empty field");
    }
    auto it = index.find(id);
    if (it == index.end()) {
      index.emplace(id, configs.size());
      configs.push_back({id, family_from_config_id(id), {{module, value}}});
    } else {
      auto& cfg = configs[it->second];
      for (const auto& [m, v] : cfg.modules) {
        if (m == module) {
          throw DataError(where + ": duplicate module '" + module + "' for " + id);
        }
      }
      cfg.modules.emplace_back(module, value);
    }
  }
  return configs;
}

void write_problems_csv(const std::string& path,
                        const std::vector<ProblemRecord>& problems) {
  std::ostringstream out;
  out << "problem_id,function,instance,dimension,class\n";
  for (const auto& p : problems) {
    io::check_field(p.id, ',', path);
    io::check_field(p.function, ',', path);
    io::check_field(p.problem_class, ',', path);
    out << p.id << ',' << p.function << ',' << p.instance_index << ','
        << p.dimension << ',' << p.problem_class << '\n';
  }
  io::write_file(path, out.str());
}

std::vector<ProblemRecord> read_problems_csv(const std::string& path) {
  const std::string contents = io::read_file(path);
  const auto lines = io::split_lines(contents);
  if (lines.empty() || lines[0] != "problem_id,function,instance,dimension,class") {
    throw DataError(path + ": missing or wrong problems CSV header");
  }
  std::vector<ProblemRecord> problems;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const std::string where = path + ":" + std::to_string(n + 1);
    const auto fields = io::split(lines[n], ',');
    if (fields.size() != 5) {
      throw DataError(where + ": expected 5 comma-separated fields, got " +
                      std::to_string(fields.size()));
    }
    ProblemRecord p;
    p.id = std::string(fields[0]);
    p.function = std::string(fields[1]);
    p.instance_index = static_cast<int>(io::parse_long(fields[2], where));
    p.dimension = static_cast<int>(io::parse_long(fields[3], where));
    p.problem_class = std::string(fields[4]);
    if (p.id.empty() || p.function.empty() || p.problem_class.empty()) {
      throw DataError(where + ": empty field");
    }
    problems.push_back(std::move(p));
  }
  return problems;
}

}  // namespace kgperf
