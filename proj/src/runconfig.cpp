#include "kgperf/runconfig.hpp"

#include <algorithm>

#include "kgperf/errors.hpp"
#include "kgperf/io.hpp"
#include "kgperf/modde.hpp"
#include "kgperf/problems.hpp"

namespace kgperf {
namespace {

std::vector<std::string_view> split_list(std::string_view v) {
  auto parts = io::split(v, ',');
  if (parts.size() == 1 && parts[0].empty())
    return {};
  for (auto& p : parts) {
    while (!p.empty() && (p.front() == ' ' || p.front() == '\t'))
      p.remove_prefix(1);
    while (!p.empty() && (p.back() == ' ' || p.back() == '\t'))
      p.remove_suffix(1);
  }
  return parts;
}

}  // namespace

void RunConfig::validate() const {
  if (dimension < 1) throw ConfigError("dimension must be positive");
  if (functions.empty()) throw ConfigError("functions list is empty");
  for (int f : functions)
    if (f < 1 || f > kNumFunctions)
      throw ConfigError("function index out of range: " + std::to_string(f));
  if (instances < 1) throw ConfigError("instances must be positive");
  if (budgets.empty()) throw ConfigError("budgets list is empty");
  for (long b : budgets)
    if (b < 1) throw ConfigError("budgets must be positive");
  if (thresholds.empty()) throw ConfigError("thresholds list is empty");
  for (double t : thresholds)
    if (!(t > 0)) throw ConfigError("thresholds must be positive");
  if (runs < 1 || runs % 2 == 0)
    throw ConfigError("runs must be a positive odd number");
  if (configs < 0) throw ConfigError("configs must be nonnegative");
  if (sample_repetitions < 1)
    throw ConfigError("sample_repetitions must be positive");
  if (grid_k.empty() || grid_lr.empty() || grid_loss.empty())
    throw ConfigError("grid lists must be nonempty");
  for (int k : grid_k)
    if (k < 1) throw ConfigError("grid_k entries must be positive");
  for (double lr : grid_lr)
    if (!(lr > 0)) throw ConfigError("grid_lr entries must be positive");
  if (repeats < 1) throw ConfigError("repeats must be positive");
  if (rf_trees < 1) throw ConfigError("rf_trees must be positive");
  train_config().validate();
  ModdeConfig scalars;
  scalars.f0 = f0;
  scalars.cr0 = cr0;
  scalars.pop0 = pop_size;
  scalars.pbest_rate = pbest_rate;
  scalars.validate();
}

TrainConfig RunConfig::train_config() const {
  TrainConfig t;
  t.k = grid_k.front();
  t.learning_rate = grid_lr.front();
  t.loss = grid_loss.front();
  t.max_epochs = max_epochs;
  t.patience = patience;
  t.negatives_per_positive = negatives_per_positive;
  t.batch_size = batch_size;
  t.margin = margin;
  t.adv_alpha = adversarial_temperature;
  t.l2 = l2;
  t.seed = seed;
  return t;
}

RunConfig parse_run_config(const std::string& text, const std::string& where) {
  RunConfig cfg;
  auto lines = io::split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string_view line = lines[ln];
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' ||
                             line.back() == '\r'))
      line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t'))
      line.remove_prefix(1);
    if (line.empty()) continue;

    std::string ctx = where + " line " + std::to_string(ln + 1);
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(ctx + ": expected key=value");
    auto trim = [](std::string_view s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
      return s;
    };
    std::string_view key = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(ctx + ": empty key");

    auto as_int = [&] { return static_cast<int>(io::parse_long(value, ctx)); };
    auto as_double = [&] { return io::parse_double(value, ctx); };

    try {
      if (key == "dimension") cfg.dimension = as_int();
      else if (key == "functions") {
        cfg.functions.clear();
        for (auto p : split_list(value))
          cfg.functions.push_back(static_cast<int>(io::parse_long(p, ctx)));
      } else if (key == "instances") cfg.instances = as_int();
      else if (key == "budgets") {
        cfg.budgets.clear();
        for (auto p : split_list(value))
          cfg.budgets.push_back(io::parse_long(p, ctx));
      } else if (key == "thresholds") {
        cfg.thresholds.clear();
        for (auto p : split_list(value))
          cfg.thresholds.push_back(io::parse_double(p, ctx));
      } else if (key == "runs") cfg.runs = as_int();
      else if (key == "seed") cfg.seed = io::parse_ulong(value, ctx);
      else if (key == "configs") cfg.configs = as_int();
      else if (key == "threads")
        cfg.threads = static_cast<unsigned>(io::parse_long(value, ctx));
      else if (key == "f0") cfg.f0 = as_double();
      else if (key == "cr0") cfg.cr0 = as_double();
      else if (key == "pop_size") cfg.pop_size = as_int();
      else if (key == "pbest_rate") cfg.pbest_rate = as_double();
      else if (key == "sample_strategy")
        cfg.sample_strategy = ela::parse_sample_strategy(value);
      else if (key == "sample_size") cfg.sample_size = as_int();
      else if (key == "sample_repetitions") cfg.sample_repetitions = as_int();
      else if (key == "grid_k") {
        cfg.grid_k.clear();
        for (auto p : split_list(value))
          cfg.grid_k.push_back(static_cast<int>(io::parse_long(p, ctx)));
      } else if (key == "grid_lr") {
        cfg.grid_lr.clear();
        for (auto p : split_list(value))
          cfg.grid_lr.push_back(io::parse_double(p, ctx));
      } else if (key == "grid_loss") {
        cfg.grid_loss.clear();
        for (auto p : split_list(value)) cfg.grid_loss.push_back(parse_loss(p));
      } else if (key == "max_epochs") cfg.max_epochs = as_int();
      else if (key == "patience") cfg.patience = as_int();
      else if (key == "negatives_per_positive")
        cfg.negatives_per_positive = as_int();
      else if (key == "batch_size") cfg.batch_size = as_int();
      else if (key == "margin") cfg.margin = as_double();
      else if (key == "adversarial_temperature")
        cfg.adversarial_temperature = as_double();
      else if (key == "l2") cfg.l2 = as_double();
      else if (key == "repeats") cfg.repeats = as_int();
      else if (key == "rf_trees") cfg.rf_trees = as_int();
      else if (key == "out_dir") cfg.out_dir = std::string(value);
      else throw ConfigError(ctx + ": unknown key '" + std::string(key) + "'");
    } catch (const DataError& e) {
      // Parse failures inside a config file are usage errors, not data errors.
      throw ConfigError(e.what());
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  return parse_run_config(text, path);
}

}  // namespace kgperf
