#include "kgperf/problems.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "kgperf/errors.hpp"
#include "kgperf/io.hpp"
#include "kgperf/kg.hpp"
#include "kgperf/rng.hpp"

namespace kgperf {
namespace {

constexpr std::array<std::string_view, kNumFunctions> kClasses = {
    "separable",                  // f1 sphere
    "separable",                  // f2 axis-aligned ellipsoid
    "high_conditioning_unimodal", // f3 rotated ellipsoid
    "low_conditioning",           // f4 asymmetric quadratic
    "low_conditioning",           // f5 rosenbrock
    "multimodal_strong",          // f6 rastrigin
    "multimodal_weak",            // f7 schaffer chain
};

double ellipsoid_weight(int i, int dim) {
  if (dim == 1) return 1.0;
  return std::pow(10.0, 6.0 * i / (dim - 1));
}

double schaffer_term(double a, double b) {
  double q = a * a + b * b;
  double s = std::sin(std::sqrt(q));
  double den = 1.0 + 0.001 * q;
  return 0.5 + (s * s - 0.5) / (den * den);
}

}  // namespace

Problem::Problem(int function_index, int instance, int dimension)
    : function_(function_index) {
  if (function_index < 1 || function_index > kNumFunctions)
    throw ConfigError("function index out of range: " +
                      std::to_string(function_index));
  if (instance < 1) throw ConfigError("instance index must be positive");
  if (dimension < 1) throw ConfigError("dimension must be positive");

  record_.function = function_name(function_index);
  record_.instance_index = instance;
  record_.dimension = dimension;
  record_.problem_class = std::string(problem_class_of(function_index));
  record_.id = problem_label(record_.function, instance, dimension);

  std::uint64_t seed = fnv1a64(record_.function);
  seed = derive_seed(seed, static_cast<std::uint64_t>(instance));
  seed = derive_seed(seed, static_cast<std::uint64_t>(dimension));
  Rng rng(seed);
  shift_.resize(dimension);
  for (double& s : shift_) s = rng.uniform(-4.0, 4.0);

  if (function_ == 3) {
    // Random orthonormal basis: Gaussian matrix, Gram-Schmidt by rows.
    int d = dimension;
    rotation_.resize(static_cast<std::size_t>(d) * d);
    for (double& v : rotation_) v = rng.normal(0.0, 1.0);
    for (int r = 0; r < d; ++r) {
      double* row = rotation_.data() + static_cast<std::size_t>(r) * d;
      for (int prev = 0; prev < r; ++prev) {
        const double* p = rotation_.data() + static_cast<std::size_t>(prev) * d;
        double dot = 0;
        for (int c = 0; c < d; ++c) dot += row[c] * p[c];
        for (int c = 0; c < d; ++c) row[c] -= dot * p[c];
      }
      double norm = 0;
      for (int c = 0; c < d; ++c) norm += row[c] * row[c];
      norm = std::sqrt(norm);
      if (norm < 1e-9) {
        // Degenerate draw; fall back to the unit vector for this row.
        for (int c = 0; c < d; ++c) row[c] = c == r ? 1.0 : 0.0;
      } else {
        for (int c = 0; c < d; ++c) row[c] /= norm;
      }
    }
  }
}

double Problem::evaluate(std::span<const double> x) const {
  const int d = record_.dimension;
  if (static_cast<int>(x.size()) != d)
    throw ConfigError("evaluate: dimension mismatch");

  std::vector<double> z(d);
  for (int i = 0; i < d; ++i) z[i] = x[i] - shift_[i];

  switch (function_) {
    case 1: {
      double s = 0;
      for (double v : z) s += v * v;
      return s;
    }
    case 2: {
      double s = 0;
      for (int i = 0; i < d; ++i) s += ellipsoid_weight(i, d) * z[i] * z[i];
      return s;
    }
    case 3: {
      std::vector<double> w(d, 0.0);
      for (int r = 0; r < d; ++r) {
        const double* row = rotation_.data() + static_cast<std::size_t>(r) * d;
        for (int c = 0; c < d; ++c) w[r] += row[c] * z[c];
      }
      double s = 0;
      for (int i = 0; i < d; ++i) s += ellipsoid_weight(i, d) * w[i] * w[i];
      return s;
    }
    case 4: {
      double s = 0;
      for (double v : z) {
        double w = v > 0 ? 10.0 * v : v;
        s += w * w;
      }
      return s;
    }
    case 5: {
      // Optimum of the classic form is at z = 1; recenter so x = shift wins.
      if (d == 1) {
        double v = z[0];
        return v * v;
      }
      for (double& v : z) v += 1.0;
      double s = 0;
      for (int i = 0; i + 1 < d; ++i) {
        double a = z[i] * z[i] - z[i + 1];
        double b = z[i] - 1.0;
        s += 100.0 * a * a + b * b;
      }
      return s;
    }
    case 6: {
      double s = 10.0 * d;
      for (double v : z)
        s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
      return s;
    }
    case 7: {
      if (d == 1) return schaffer_term(z[0], 0.0);
      double s = 0;
      for (int i = 0; i + 1 < d; ++i) s += schaffer_term(z[i], z[i + 1]);
      return s;
    }
    default:
      throw ConfigError("bad function index");
  }
}

std::string function_name(int function_index) {
  return "f" + std::to_string(function_index);
}

std::string_view problem_class_of(int function_index) {
  if (function_index < 1 || function_index > kNumFunctions)
    throw ConfigError("function index out of range: " +
                      std::to_string(function_index));
  return kClasses[function_index - 1];
}

int parse_function_index(std::string_view name) {
  if (name.size() < 2 || name[0] != 'f')
    throw ConfigError("bad function name: " + std::string(name));
  int idx = static_cast<int>(io::parse_long(name.substr(1), "function name"));
  if (idx < 1 || idx > kNumFunctions)
    throw ConfigError("function index out of range: " + std::string(name));
  return idx;
}

std::vector<Problem> make_problem_set(const std::vector<int>& function_indices,
                                      int instances, int dimension) {
  if (function_indices.empty()) throw ConfigError("no functions selected");
  if (instances < 1) throw ConfigError("instance count must be positive");
  std::vector<Problem> out;
  out.reserve(function_indices.size() * instances);
  for (int f : function_indices)
    for (int inst = 1; inst <= instances; ++inst)
      out.emplace_back(f, inst, dimension);
  return out;
}

}  // namespace kgperf
