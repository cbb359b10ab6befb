#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kgperf/records.hpp"

namespace kgperf {

inline constexpr int kNumFunctions = 7;
inline constexpr double kDomainLo = -5.0;
inline constexpr double kDomainHi = 5.0;

/// One shifted (and for f3 rotated) test function on [-5,5]^D. The optimum
/// value is 0, so a raw function value is directly the target precision.
/// The shift depends only on (function, instance, dimension), so problem ids
/// are canonical: the same id names the same landscape everywhere.
class Problem {
 public:
  Problem(int function_index, int instance, int dimension);

  double evaluate(std::span<const double> x) const;

  const ProblemRecord& record() const { return record_; }
  const std::vector<double>& shift() const { return shift_; }
  int dimension() const { return record_.dimension; }

 private:
  int function_ = 1;
  ProblemRecord record_;
  std::vector<double> shift_;
  std::vector<double> rotation_;  // row-major D x D; empty means identity
};

std::string function_name(int function_index);          // "f1".."f7"
int parse_function_index(std::string_view name);        // inverse, strict
std::string_view problem_class_of(int function_index);

/// Problems for the cross product functions x instances at one dimension,
/// ordered function-major then instance (instances are 1-based).
std::vector<Problem> make_problem_set(const std::vector<int>& function_indices,
                                      int instances, int dimension);

}  // namespace kgperf
