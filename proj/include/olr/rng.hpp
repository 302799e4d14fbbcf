#pragma once

#include <cstdint>
#include <random>

namespace olr {

/// Mixes a parent seed with a stream tag (splitmix64 finalizer). Used to give
/// every sub-component of a run its own reproducible generator.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Child seeds follow one rule everywhere: child 0 inherits the parent seed,
/// later children get derived seeds. A one-child composite therefore behaves
/// exactly like its child run standalone.
inline std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index) {
  return index == 0 ? seed : derive_seed(seed, index);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // 53-bit uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal(double mean = 0.0, double stddev = 1.0) {
    return std::normal_distribution<double>(mean, stddev)(engine_);
  }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
  }
  int sign() { return (engine_() >> 63) != 0 ? 1 : -1; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace olr
