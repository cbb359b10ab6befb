#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kgperf::ela {

enum class SampleStrategy { uniform, halton };

SampleStrategy parse_sample_strategy(std::string_view s);
std::string_view to_string(SampleStrategy s);

/// Sampling plan for one problem: `repetitions` point sets of `sample_size`
/// points each, all inside [-5, 5]^D. sample_size 0 means 100*D.
struct SampleDesign {
  SampleStrategy strategy = SampleStrategy::halton;
  int sample_size = 0;
  int repetitions = 5;
  std::uint64_t seed = 1;

  int resolved_size(int dim) const { return sample_size > 0 ? sample_size : 100 * dim; }
};

/// One evaluated point set; points is row-major count x dim.
struct Sample {
  int dim = 0;
  int count = 0;
  std::vector<double> points;
  std::vector<double> values;

  std::span<const double> point(int i) const {
    return {points.data() + static_cast<std::size_t>(i) * dim,
            static_cast<std::size_t>(dim)};
  }
};

using Objective = std::function<double(std::span<const double>)>;

/// Draws repetition `repetition` of the design and evaluates f at each point.
/// Uniform repetitions use sub-seed mix(seed, repetition); Halton repetitions
/// use disjoint index windows of the same sequence (repetition r covers
/// indices 1 + r*size .. r*size + size, index 0 skipped).
Sample sample_points(const SampleDesign& design, int dim, const Objective& f,
                     int repetition);

/// Halton radical inverse in the given base for one index.
double radical_inverse(std::uint64_t index, std::uint64_t base);

/// Summary statistics of one evaluated sample. When all values are equal the
/// whole landscape is flat; the convention for that case is skewness 0,
/// kurtosis 0, both r2 1, ratio fields best_to_mean 0 and dispersion 1.
struct FeatureVector {
  double y_skewness = 0;
  double y_kurtosis = 0;
  double lin_model_r2 = 0;
  double quad_model_r2 = 0;
  double lin_quad_r2_ratio = 0;
  double best_to_mean_ratio = 0;
  double dispersion_ratio_10pct = 0;

  static constexpr std::size_t kCount = 7;
  static const std::array<std::string_view, kCount>& names();
  std::array<double, kCount> values() const;
  static FeatureVector from_values(const std::array<double, kCount>& v);

  bool operator==(const FeatureVector&) const = default;
};

/// Requires at least dim + 2 samples so the model fits are determined.
/// Skewness/kurtosis are standardized central moments of the values;
/// r2 values come from least-squares fits of a linear and a
/// diagonal-quadratic model (1 - SSE/SST, clamped to [0, 1]).
FeatureVector compute_features(const Sample& sample);

/// Componentwise median; even counts average the two middle values.
FeatureVector median_features(std::span<const FeatureVector> reps);

/// Raw per-problem feature values; rectangular (every problem has a value
/// for every feature). Feature names are data, so externally computed
/// feature sets of any size flow through unchanged.
struct RawFeatureTable {
  std::vector<std::string> problems;
  std::vector<std::string> features;
  std::vector<std::vector<double>> values;  // [problem][feature]

  bool operator==(const RawFeatureTable&) const = default;
};

/// Equal-width discretization into 10 bins per feature column. Bin edges come
/// from the column min/max over the whole problem set; the max value maps to
/// bin 9 and a constant column maps everything to bin 0.
struct BinnedFeatureTable {
  std::vector<std::string> problems;
  std::vector<std::string> features;
  std::vector<std::array<double, 2>> ranges;  // per-feature (min, max)
  std::vector<std::vector<int>> bins;         // [problem][feature], 0..9

  std::optional<std::size_t> row_of(std::string_view problem_id) const;
};

BinnedFeatureTable bin_features(const RawFeatureTable& raw);

int bin_value(double v, double lo, double hi);

// Features CSV: header `problem_id,feature_name,value`, one row per
// (problem, feature); also the ingestion format for external feature sets.
void write_features_csv(const std::string& path, const RawFeatureTable& table);
RawFeatureTable read_features_csv(const std::string& path);

RawFeatureTable make_raw_table(const std::vector<std::string>& problem_ids,
                               const std::vector<FeatureVector>& features);

}  // namespace kgperf::ela
