// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace swipt {

/// Deterministic random stream for channel generation.
///
/// Wraps std::mt19937_64 but derives every variate from raw 64-bit engine
/// words (53-bit uniforms, Box-Muller Gaussians), so a given seed reproduces
/// the same draws bit-for-bit regardless of the standard library's
/// distribution implementations. Substreams for Monte Carlo trials are
/// decorrelated with a splitmix64 finalizer, which keeps trial t independent
/// of the thread that happens to run it.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for trial `stream_id` under one master seed.
  static Rng substream(std::uint64_t master_seed, std::uint64_t stream_id) {
    return Rng(mix(master_seed, stream_id));
  }

  /// Uniform draw in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Circularly-symmetric complex Gaussian with E|z|^2 = 1.
  std::complex<double> complex_gaussian() {
    const double u = 1.0 - uniform01();  // (0, 1], keeps the log finite
    const double r = std::sqrt(-std::log(u));
    const double theta = 2.0 * kPi * uniform01();
    return {r * std::cos(theta), r * std::sin(theta)};
  }

 private:
  static constexpr double kPi = 3.141592653589793238462643383279502884;

  static std::uint64_t mix(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace swipt
