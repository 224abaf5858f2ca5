#pragma once

#include <cstdint>
#include <random>

namespace jch {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Counter-based seed for one (parameter point, realization) job. Pure function
/// of its arguments, so results do not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t parameter_index,
                          std::uint64_t realization_index);

/// Seeded stream. Uniform and Gaussian draws are computed here rather than
/// through <random> distributions so sequences are identical across standard
/// library implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller.
  double normal();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace jch
