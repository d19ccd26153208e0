#pragma once

#include <cstdint>
#include <random>

namespace nandwalk {

// Seeded generator used everywhere randomness appears. The engine is
// std::mt19937_64, whose output sequence is fixed by the standard; the
// distributions below are written out by hand because the standard library
// distributions are implementation-defined, and reports must be
// byte-identical across toolchains for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool coin(double p_true) { return uniform() < p_true; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace nandwalk
