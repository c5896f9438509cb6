#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace dpboot {

// Deterministic random stream. All draws are produced by explicit transforms
// of the mt19937_64 output so that a given (seed, derivation path) yields the
// same sequence everywhere. Substreams for replicates, grid points and
// threads are derived with derive(), never by sharing an engine.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  // Independent stream addressed by a path of indices under a root seed,
  // e.g. derive(seed, {grid_index, replication_index}).
  static Rng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

  // Uniform on (0, 1], 53-bit resolution. Never returns 0, so logs are safe.
  double uniform01();

  // Uniform integer in [0, n). Unbiased (Lemire rejection). n must be > 0.
  std::uint64_t uniform_below(std::uint64_t n);

  double normal(double mean = 0.0, double sd = 1.0);

  // Laplace(location, scale) via inverse CDF.
  double laplace(double location, double scale);

 private:
  static std::uint64_t mix(std::uint64_t x);

  std::mt19937_64 engine_;
};

}  // namespace dpboot
