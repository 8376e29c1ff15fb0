#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace privsq {

// Seedable generator whose output is identical on every platform.
//
// The engine is std::mt19937_64, whose sequence is fixed by the standard.
// The standard distributions are not, so uniform and normal variates are
// derived here: uniforms from the top 53 bits, normals via Box-Muller.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal variate.
  double normal();

  /// Complex normal with independent N(0, 1/2) real and imaginary parts.
  std::complex<double> complex_normal();

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace privsq
