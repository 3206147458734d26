#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace vqst {

/// Seed-derivation purposes. Every random stream in the project is derived
/// from a master seed via derive_seed(master, purpose, index), so results are
/// reproducible regardless of execution order or thread scheduling.
enum class SeedPurpose : std::uint64_t {
  DataSampling = 1,    // shot sampling while acquiring the target dataset
  BasisSelection = 2,  // random measurement-basis subsets
  ParamInit = 3,       // ansatz parameter initialization
  Optimizer = 4,       // SPSA perturbation directions
  TrainSampling = 5,   // per-iteration ansatz measurement shots
  CircuitBuild = 6,    // random-circuit target construction
};

/// SplitMix64 finalizer. Fixed constants from the reference implementation.
std::uint64_t mix64(std::uint64_t z);

/// Deterministically derive a child seed from (master, purpose, index).
std::uint64_t derive_seed(std::uint64_t master, SeedPurpose purpose,
                          std::uint64_t index);

/// Seeded random stream. Wraps std::mt19937_64 (whose output sequence is
/// pinned by the standard) and implements its own value distributions so
/// draws are bit-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n), unbiased (rejection sampling). n must be > 0.
  std::uint64_t uniform_below(std::uint64_t n);

  /// Fair ±1 draw.
  int rademacher() { return (next_u64() >> 63) ? 1 : -1; }

  /// Standard normal via Box-Muller (used only by tests needing random
  /// state vectors; kept here so all draws share one engine contract).
  double normal();

  /// First k entries of a uniformly random permutation of 0..n-1
  /// (partial Fisher-Yates).
  std::vector<std::uint64_t> sample_without_replacement(std::uint64_t n,
                                                        std::uint64_t k);

 private:
  std::mt19937_64 engine_;
  bool have_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace vqst
