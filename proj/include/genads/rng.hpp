//==============================================================================
// rng.hpp
// Deterministic random streams. Every consumer of randomness receives its own
// mt19937_64 stream derived from (master seed, domain, index), so batch
// assembly, evaluation and generation can run in any order (or in parallel)
// without changing results. std::*_distribution is implementation-defined;
// uniforms and normals are produced from raw bits instead.
//==============================================================================
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace genads {

// SplitMix64 finalizer; decorrelates consecutive stream indices.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Independent uses of one master seed live in separate domains.
enum class RngDomain : std::uint64_t {
  ModelInit = 1,
  TrainSample = 2,
  EvalBase = 3,
  EvalReference = 4,
  Generate = 5,
  Test = 99,
};

inline std::uint64_t stream_seed(std::uint64_t master, RngDomain domain,
                                 std::uint64_t index) {
  return mix64(mix64(master + 0x9E3779B97F4A7C15ull *
                                  static_cast<std::uint64_t>(domain)) +
               index);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; the second member of each pair is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 6.28318530717958647692528676655900577 * u2;
    spare_ = rad * std::sin(ang);
    have_spare_ = true;
    return rad * std::cos(ang);
  }

  // Unbiased integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t excess = (max % n + 1) % n;  // 2^64 mod n
    const std::uint64_t limit = max - excess;
    std::uint64_t x = gen_();
    while (x > limit) x = gen_();
    return x % n;
  }

  std::uint64_t bits() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline Rng make_stream(std::uint64_t master, RngDomain domain,
                       std::uint64_t index) {
  return Rng(stream_seed(master, domain, index));
}

}  // namespace genads
