#include "kgperf/ela.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "kgperf/errors.hpp"
#include "kgperf/io.hpp"
#include "kgperf/rng.hpp"

namespace kgperf::ela {
namespace {

constexpr double kLo = -5.0;
constexpr double kHi = 5.0;

// First 25 primes; Halton bases for up to 25 dimensions.
constexpr std::array<std::uint64_t, 25> kPrimes = {
    2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
    43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

double mean_of(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

/// Solves the p x p normal equations A w = b by Gaussian elimination with
/// partial pivoting. Returns false on a (numerically) singular system.
bool solve_normal(std::vector<double>& a, std::vector<double>& b, int p) {
  for (int col = 0; col < p; ++col) {
    int piv = col;
    for (int r = col + 1; r < p; ++r)
      if (std::abs(a[r * p + col]) > std::abs(a[piv * p + col])) piv = r;
    if (std::abs(a[piv * p + col]) < 1e-12) return false;
    if (piv != col) {
      for (int c = 0; c < p; ++c) std::swap(a[piv * p + c], a[col * p + c]);
      std::swap(b[piv], b[col]);
    }
    for (int r = col + 1; r < p; ++r) {
      double m = a[r * p + col] / a[col * p + col];
      if (m == 0) continue;
      for (int c = col; c < p; ++c) a[r * p + c] -= m * a[col * p + c];
      b[r] -= m * b[col];
    }
  }
  for (int col = p - 1; col >= 0; --col) {
    double s = b[col];
    for (int c = col + 1; c < p; ++c) s -= a[col * p + c] * b[c];
    b[col] = s / a[col * p + col];
  }
  return true;
}

/// R^2 of the least-squares fit of y on the given basis expansion (row-major
/// n x p). SST == 0 (constant y) yields 1; a singular fit yields 0.
double fit_r2(const std::vector<double>& X, std::span<const double> y, int n, int p) {
  double ybar = mean_of(y);
  double sst = 0;
  for (double v : y) sst += (v - ybar) * (v - ybar);
  if (sst == 0) return 1.0;

  std::vector<double> a(static_cast<std::size_t>(p) * p, 0.0);
  std::vector<double> b(p, 0.0);
  for (int i = 0; i < n; ++i) {
    const double* row = X.data() + static_cast<std::size_t>(i) * p;
    for (int r = 0; r < p; ++r) {
      b[r] += row[r] * y[i];
      for (int c = r; c < p; ++c) a[r * p + c] += row[r] * row[c];
    }
  }
  for (int r = 0; r < p; ++r)
    for (int c = 0; c < r; ++c) a[r * p + c] = a[c * p + r];

  if (!solve_normal(a, b, p)) return 0.0;

  double sse = 0;
  for (int i = 0; i < n; ++i) {
    const double* row = X.data() + static_cast<std::size_t>(i) * p;
    double pred = 0;
    for (int r = 0; r < p; ++r) pred += row[r] * b[r];
    sse += (y[i] - pred) * (y[i] - pred);
  }
  return std::clamp(1.0 - sse / sst, 0.0, 1.0);
}

}  // namespace

SampleStrategy parse_sample_strategy(std::string_view s) {
  if (s == "uniform") return SampleStrategy::uniform;
  if (s == "halton") return SampleStrategy::halton;
  throw ConfigError("unknown sample strategy: " + std::string(s));
}

std::string_view to_string(SampleStrategy s) {
  return s == SampleStrategy::uniform ? "uniform" : "halton";
}

double radical_inverse(std::uint64_t index, std::uint64_t base) {
  double result = 0;
  double inv = 1.0 / static_cast<double>(base);
  double scale = inv;
  while (index > 0) {
    result += static_cast<double>(index % base) * scale;
    index /= base;
    scale *= inv;
  }
  return result;
}

Sample sample_points(const SampleDesign& design, int dim, const Objective& f,
                     int repetition) {
  if (dim < 1) throw ConfigError("sample dimension must be positive");
  if (design.strategy == SampleStrategy::halton &&
      dim > static_cast<int>(kPrimes.size()))
    throw ConfigError("halton sampling supports at most 25 dimensions");
  if (repetition < 0 || repetition >= design.repetitions)
    throw ConfigError("sample repetition out of range");

  const int n = design.resolved_size(dim);
  Sample s;
  s.dim = dim;
  s.count = n;
  s.points.resize(static_cast<std::size_t>(n) * dim);
  s.values.resize(n);

  if (design.strategy == SampleStrategy::uniform) {
    Rng rng(derive_seed(design.seed, static_cast<std::uint64_t>(repetition)));
    for (double& x : s.points) x = rng.uniform(kLo, kHi);
  } else {
    // Index 0 of the Halton sequence is the origin in every base; skip it.
    std::uint64_t start = 1 + static_cast<std::uint64_t>(repetition) *
                                  static_cast<std::uint64_t>(n);
    for (int i = 0; i < n; ++i)
      for (int d = 0; d < dim; ++d)
        s.points[static_cast<std::size_t>(i) * dim + d] =
            kLo + (kHi - kLo) * radical_inverse(start + i, kPrimes[d]);
  }

  for (int i = 0; i < n; ++i) s.values[i] = f(s.point(i));
  return s;
}

const std::array<std::string_view, FeatureVector::kCount>& FeatureVector::names() {
  static const std::array<std::string_view, kCount> kNames = {
      "y_skewness",          "y_kurtosis",        "lin_model_r2",
      "quad_model_r2",       "lin_quad_r2_ratio", "best_to_mean_ratio",
      "dispersion_ratio_10pct"};
  return kNames;
}

std::array<double, FeatureVector::kCount> FeatureVector::values() const {
  return {y_skewness,        y_kurtosis,         lin_model_r2,
          quad_model_r2,     lin_quad_r2_ratio,  best_to_mean_ratio,
          dispersion_ratio_10pct};
}

FeatureVector FeatureVector::from_values(const std::array<double, kCount>& v) {
  FeatureVector f;
  f.y_skewness = v[0];
  f.y_kurtosis = v[1];
  f.lin_model_r2 = v[2];
  f.quad_model_r2 = v[3];
  f.lin_quad_r2_ratio = v[4];
  f.best_to_mean_ratio = v[5];
  f.dispersion_ratio_10pct = v[6];
  return f;
}

FeatureVector compute_features(const Sample& sample) {
  const int n = sample.count;
  const int dim = sample.dim;
  if (n < dim + 2) throw DataError("sample too small for feature computation");

  const auto& y = sample.values;
  double ybar = mean_of(y);
  double m2 = 0, m3 = 0, m4 = 0;
  for (double v : y) {
    double d = v - ybar;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;

  FeatureVector out;
  if (m2 == 0) {
    out.lin_model_r2 = 1.0;
    out.quad_model_r2 = 1.0;
    out.lin_quad_r2_ratio = 1.0;
    out.best_to_mean_ratio = 0.0;
    out.dispersion_ratio_10pct = 1.0;
    return out;
  }
  out.y_skewness = m3 / std::pow(m2, 1.5);
  out.y_kurtosis = m4 / (m2 * m2) - 3.0;

  // Linear model: intercept plus one slope per coordinate.
  {
    int p = dim + 1;
    std::vector<double> X(static_cast<std::size_t>(n) * p);
    for (int i = 0; i < n; ++i) {
      auto pt = sample.point(i);
      double* row = X.data() + static_cast<std::size_t>(i) * p;
      row[0] = 1.0;
      for (int d = 0; d < dim; ++d) row[1 + d] = pt[d];
    }
    out.lin_model_r2 = fit_r2(X, y, n, p);
  }

  // Diagonal quadratic: intercept, linear terms, squared terms.
  {
    int p = 2 * dim + 1;
    std::vector<double> X(static_cast<std::size_t>(n) * p);
    for (int i = 0; i < n; ++i) {
      auto pt = sample.point(i);
      double* row = X.data() + static_cast<std::size_t>(i) * p;
      row[0] = 1.0;
      for (int d = 0; d < dim; ++d) {
        row[1 + d] = pt[d];
        row[1 + dim + d] = pt[d] * pt[d];
      }
    }
    out.quad_model_r2 = fit_r2(X, y, n, p);
  }

  out.lin_quad_r2_ratio =
      out.quad_model_r2 == 0 ? 1.0 : out.lin_model_r2 / out.quad_model_r2;

  // Position of the mean within the value range; near 1 means the best value
  // sits far below the bulk.
  double ymin = *std::min_element(y.begin(), y.end());
  double ymax = *std::max_element(y.begin(), y.end());
  out.best_to_mean_ratio = (ybar - ymin) / (ymax - ymin);

  // Mean pairwise distance among the best 10% of points vs among all points.
  {
    int top = std::max(2, n / 10);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return y[a] < y[b]; });

    auto mean_dist = [&](std::span<const int> idx) {
      double sum = 0;
      std::size_t pairs = 0;
      for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
          auto pa = sample.point(idx[a]);
          auto pb = sample.point(idx[b]);
          double d2 = 0;
          for (int d = 0; d < dim; ++d) {
            double diff = pa[d] - pb[d];
            d2 += diff * diff;
          }
          sum += std::sqrt(d2);
          ++pairs;
        }
      return sum / static_cast<double>(pairs);
    };

    double all = mean_dist(order);
    double best = mean_dist(std::span<const int>(order.data(), top));
    out.dispersion_ratio_10pct = all == 0 ? 1.0 : best / all;
  }
  return out;
}

FeatureVector median_features(std::span<const FeatureVector> reps) {
  if (reps.empty()) throw DataError("median over zero feature vectors");
  std::array<double, FeatureVector::kCount> med{};
  std::vector<double> col(reps.size());
  for (std::size_t j = 0; j < FeatureVector::kCount; ++j) {
    for (std::size_t i = 0; i < reps.size(); ++i) col[i] = reps[i].values()[j];
    std::sort(col.begin(), col.end());
    std::size_t m = col.size() / 2;
    med[j] = col.size() % 2 == 1 ? col[m] : 0.5 * (col[m - 1] + col[m]);
  }
  return FeatureVector::from_values(med);
}

std::optional<std::size_t> BinnedFeatureTable::row_of(
    std::string_view problem_id) const {
  for (std::size_t i = 0; i < problems.size(); ++i)
    if (problems[i] == problem_id) return i;
  return std::nullopt;
}

int bin_value(double v, double lo, double hi) {
  if (hi <= lo) return 0;
  int b = static_cast<int>(std::floor(10.0 * (v - lo) / (hi - lo)));
  return std::clamp(b, 0, 9);
}

BinnedFeatureTable bin_features(const RawFeatureTable& raw) {
  BinnedFeatureTable out;
  out.problems = raw.problems;
  out.features = raw.features;
  out.ranges.resize(raw.features.size());
  if (raw.problems.empty()) throw DataError("feature table has no problems");
  for (const auto& row : raw.values)
    if (row.size() != raw.features.size())
      throw DataError("feature table row width mismatch");

  for (std::size_t j = 0; j < raw.features.size(); ++j) {
    double lo = raw.values[0][j], hi = raw.values[0][j];
    for (const auto& row : raw.values) {
      lo = std::min(lo, row[j]);
      hi = std::max(hi, row[j]);
    }
    out.ranges[j] = {lo, hi};
  }
  out.bins.resize(raw.problems.size());
  for (std::size_t i = 0; i < raw.problems.size(); ++i) {
    out.bins[i].resize(raw.features.size());
    for (std::size_t j = 0; j < raw.features.size(); ++j)
      out.bins[i][j] =
          bin_value(raw.values[i][j], out.ranges[j][0], out.ranges[j][1]);
  }
  return out;
}

void write_features_csv(const std::string& path, const RawFeatureTable& table) {
  std::string out = "problem_id,feature_name,value\n";
  for (std::size_t i = 0; i < table.problems.size(); ++i)
    for (std::size_t j = 0; j < table.features.size(); ++j) {
      out += table.problems[i];
      out += ',';
      out += table.features[j];
      out += ',';
      out += io::format_double(table.values[i][j]);
      out += '\n';
    }
  io::write_file(path, out);
}

RawFeatureTable read_features_csv(const std::string& path) {
  const std::string text = io::read_file(path);
  auto lines = io::split_lines(text);
  if (lines.empty() || lines[0] != "problem_id,feature_name,value")
    throw DataError(path + ": bad features header");

  // First pass fixes problem and feature order (first appearance).
  std::vector<std::string> problems, features;
  std::map<std::string, std::size_t, std::less<>> pidx, fidx;
  struct Cell { std::size_t p, f; double v; };
  std::vector<Cell> cells;
  std::set<std::pair<std::size_t, std::size_t>> seen;

  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    auto where = path + " line " + std::to_string(ln + 1);
    auto fields = io::split(lines[ln], ',');
    if (fields.size() != 3) throw DataError(where + ": expected 3 fields");
    auto pit = pidx.find(fields[0]);
    if (pit == pidx.end()) {
      io::check_field(fields[0], ',', where);
      pit = pidx.emplace(std::string(fields[0]), problems.size()).first;
      problems.emplace_back(fields[0]);
    }
    auto fit = fidx.find(fields[1]);
    if (fit == fidx.end()) {
      io::check_field(fields[1], ',', where);
      fit = fidx.emplace(std::string(fields[1]), features.size()).first;
      features.emplace_back(fields[1]);
    }
    if (!seen.emplace(pit->second, fit->second).second)
      throw DataError(where + ": duplicate feature value");
    cells.push_back({pit->second, fit->second, io::parse_double(fields[2], where)});
  }
  if (problems.empty()) throw DataError(path + ": no feature rows");

  RawFeatureTable table;
  table.problems = std::move(problems);
  table.features = std::move(features);
  table.values.assign(table.problems.size(),
                      std::vector<double>(table.features.size(), 0.0));
  std::vector<std::vector<bool>> filled(
      table.problems.size(), std::vector<bool>(table.features.size(), false));
  for (const auto& c : cells) {
    table.values[c.p][c.f] = c.v;
    filled[c.p][c.f] = true;
  }
  for (std::size_t i = 0; i < filled.size(); ++i)
    for (std::size_t j = 0; j < filled[i].size(); ++j)
      if (!filled[i][j])
        throw DataError(path + ": missing value for " + table.problems[i] +
                        " feature " + table.features[j]);
  return table;
}

RawFeatureTable make_raw_table(const std::vector<std::string>& problem_ids,
                               const std::vector<FeatureVector>& features) {
  if (problem_ids.size() != features.size())
    throw DataError("feature table: id/vector count mismatch");
  RawFeatureTable t;
  t.problems = problem_ids;
  t.features.assign(FeatureVector::names().begin(), FeatureVector::names().end());
  t.values.reserve(features.size());
  for (const auto& f : features) {
    auto v = f.values();
    t.values.emplace_back(v.begin(), v.end());
  }
  return t;
}

}  // namespace kgperf::ela
