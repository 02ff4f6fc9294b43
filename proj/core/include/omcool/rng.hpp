#pragma once

// Seeded random source whose output is defined bit-for-bit on every platform.
//
// The engine is std::mt19937_64, whose sequence the standard fixes exactly.
// Standard-library distributions are implementation-defined, so the
// transforms below are written out: 53-bit uniforms, polar Box-Muller
// normals and Marsaglia-Tsang gamma variates.

#include <cstdint>
#include <random>

namespace omcool {

/// splitmix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for the `index`-th independent stream derived from `base`:
/// splitmix64(base + (index + 1) * 0x9E3779B97F4A7C15).
std::uint64_t split_seed(std::uint64_t base, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  /// Unit-mean exponential.
  double exponential();
  /// Gamma(shape, 1).
  double gamma(double shape);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace omcool
