#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>
#include <vector>

namespace kgperf {

/// SplitMix64 finalizer. Used everywhere a seed is derived from another
/// value so that related seeds (base, base+1, ...) decorrelate.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  return mix64(base ^ mix64(salt));
}

/// Seed for one benchmark run: mix64-chained over the base seed, the
/// config and problem labels (FNV-1a), and the run index. Order-independent
/// generation of (config, problem, run) tasks relies on this being a pure
/// function of the four inputs.
constexpr std::uint64_t derive_run_seed(std::uint64_t base, std::string_view config_id,
                                        std::string_view problem_id, std::uint64_t run_index) {
  std::uint64_t h = mix64(base ^ fnv1a64(config_id));
  h = mix64(h ^ fnv1a64(problem_id));
  return mix64(h ^ run_index);
}

/// mt19937_64 engine with hand-rolled distribution transforms. The standard
/// specifies the engine's output exactly but leaves <random> distributions
/// implementation-defined, so every distribution here is written out to keep
/// streams bit-identical across compilers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform index in [0, n). Multiply-shift reduction; the bias of at most
  /// n/2^64 is irrelevant here, determinism is not.
  std::uint64_t uniform_index(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Box-Muller without caching; one draw consumes two engine outputs.
  double normal(double mean, double stddev) {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
  }

  double cauchy(double location, double scale) {
    return location + scale * std::tan(std::numbers::pi * (uniform() - 0.5));
  }

  bool coin() { return (next_u64() & 1ULL) != 0; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_index(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace kgperf
