// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "swipt/config.hpp"
#include "swipt/rng.hpp"

namespace swipt {

/// Time-domain multipath taps of one link, drawn from an exponentially
/// decaying power profile normalized to unit expected total power.
struct TapVector {
  std::vector<std::complex<double>> taps;

  std::size_t size() const { return taps.size(); }
};

/// Per-subcarrier complex gains h_n of one link.
struct DiagonalChannel {
  std::vector<std::complex<double>> gains;

  std::size_t size() const { return gains.size(); }
  double gain_sq(std::size_t n) const { return std::norm(gains[n]); }
};

/// Elementwise |h_n|^2 of a link.
inline std::vector<double> gain_sq(const DiagonalChannel& ch) {
  std::vector<double> g(ch.size());
  for (std::size_t n = 0; n < g.size(); ++n) g[n] = ch.gain_sq(n);
  return g;
}

/// The four links of the two-user interference channel. h_ik connects
/// transmitter k to receiver i; direct links carry the path-loss amplitude,
/// cross links an extra sqrt(delta).
struct ChannelSet {
  DiagonalChannel h11, h12, h21, h22;
  double delta = 0.0;
  double pathloss_amp = 1.0;

  std::size_t n_subcarriers() const { return h11.size(); }
};

/// Per-tap variances c*exp(-decay_rate*l), normalized so they sum to 1.
inline std::vector<double> tap_variances(std::size_t tap_count, double decay_rate) {
  if (tap_count == 0) throw std::invalid_argument("tap_count must be >= 1");
  if (!(decay_rate > 0.0)) throw std::invalid_argument("decay_rate must be positive");
  std::vector<double> v(tap_count);
  double sum = 0.0;
  for (std::size_t l = 0; l < tap_count; ++l) {
    v[l] = std::exp(-decay_rate * static_cast<double>(l));
    sum += v[l];
  }
  for (double& x : v) x /= sum;
  return v;
}

/// Draws one tap vector; tap l is CN(0, v_l) with the normalized profile
/// above, so E[sum |tap_l|^2] = 1.
inline TapVector generate_taps(Rng& rng, std::size_t tap_count, double decay_rate) {
  const std::vector<double> variances = tap_variances(tap_count, decay_rate);
  TapVector out;
  out.taps.resize(tap_count);
  for (std::size_t l = 0; l < tap_count; ++l) {
    out.taps[l] = std::sqrt(variances[l]) * rng.complex_gaussian();
  }
  return out;
}

/// Subcarrier gains of a cyclic-prefixed OFDM link: the N-point DFT of the
/// zero-padded tap vector. The unitary 1/sqrt(N) transform is rescaled by
/// sqrt(N), so a single unit tap yields unit-magnitude flat gains and
/// Parseval reads sum_n |h_n|^2 = N * sum_l |tap_l|^2. This constant is used
/// everywhere; absolute energies scale with its square.
inline DiagonalChannel taps_to_subcarrier_gains(const TapVector& taps, std::size_t n_subcarriers) {
  const std::size_t tap_count = taps.size();
  if (n_subcarriers < tap_count)
    throw std::invalid_argument("n_subcarriers must be >= tap count");
  DiagonalChannel out;
  out.gains.assign(n_subcarriers, {0.0, 0.0});
  constexpr double two_pi = 6.283185307179586476925286766559;
  for (std::size_t n = 0; n < n_subcarriers; ++n) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t l = 0; l < tap_count; ++l) {
      const double angle = -two_pi * static_cast<double>(n) * static_cast<double>(l) /
                           static_cast<double>(n_subcarriers);
      acc += taps.taps[l] * std::polar(1.0, angle);
    }
    out.gains[n] = acc;
  }
  return out;
}

/// Draws the four links of one realization. Tap vectors are consumed from
/// the stream in the fixed order h11, h12, h21, h22, so the same seed gives
/// the same fading for any delta; cross links differ only by the sqrt(delta)
/// factor.
inline ChannelSet build_channel_set(const SimConfig& cfg, Rng& rng) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.n_subcarriers);
  const auto l = static_cast<std::size_t>(cfg.tap_count);
  const double direct = cfg.pathloss_amp();
  const double cross = direct * std::sqrt(cfg.delta_cross);

  const auto draw = [&](double scale) {
    TapVector taps = generate_taps(rng, l, cfg.tap_decay);
    DiagonalChannel ch = taps_to_subcarrier_gains(taps, n);
    for (auto& g : ch.gains) g *= scale;
    return ch;
  };

  ChannelSet set;
  set.h11 = draw(direct);
  set.h12 = draw(cross);
  set.h21 = draw(cross);
  set.h22 = draw(direct);
  set.delta = cfg.delta_cross;
  set.pathloss_amp = direct;
  return set;
}

}  // namespace swipt
