// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "swipt/channel.hpp"

namespace swipt {

/// Per-subcarrier transmit powers of one transmitter, in uW, with the trace
/// budget they were allocated under.
struct PowerAllocation {
  std::vector<double> p;
  double budget = 0.0;

  static PowerAllocation zeros(std::size_t n, double budget) {
    return {std::vector<double>(n, 0.0), budget};
  }

  std::size_t size() const { return p.size(); }

  double total() const {
    double s = 0.0;
    for (double x : p) s += x;
    return s;
  }

  void validate() const {
    if (!(budget > 0.0)) throw std::invalid_argument("power budget must be positive");
    for (double x : p) {
      if (!(x >= 0.0)) throw std::invalid_argument("per-subcarrier powers must be >= 0");
    }
    if (total() > budget * (1.0 + 1e-9))
      throw std::invalid_argument("allocation exceeds the power budget");
  }
};

/// Interference powers a_n = p1,n |h21,n|^2 and signal powers
/// b_n = p2,n |h22,n|^2 seen by the information-decoding receiver.
struct LinkDiagnostics {
  std::vector<double> a;
  std::vector<double> b;
};

/// One sample of the rate-energy tradeoff: bits per OFDM symbol and
/// harvested uW.
struct REPoint {
  double rate = 0.0;
  double energy = 0.0;
  bool feasible = true;
};

namespace detail {

inline void check_pair(const ChannelSet& ch, const PowerAllocation& p1,
                       const PowerAllocation& p2) {
  const std::size_t n = ch.n_subcarriers();
  if (p1.size() != n || p2.size() != n)
    throw std::invalid_argument("allocation size does not match the channel");
  p1.validate();
  p2.validate();
}

}  // namespace detail

inline LinkDiagnostics link_diagnostics(const ChannelSet& ch, const PowerAllocation& p1,
                                        const PowerAllocation& p2) {
  detail::check_pair(ch, p1, p2);
  const std::size_t n = ch.n_subcarriers();
  LinkDiagnostics d;
  d.a.resize(n);
  d.b.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.a[i] = p1.p[i] * ch.h21.gain_sq(i);
    d.b[i] = p2.p[i] * ch.h22.gain_sq(i);
  }
  return d;
}

/// Achievable rate at the ID receiver, bits per OFDM symbol:
/// sum_n log2(1 + b_n / (1 + a_n)) with the noise power normalized to
/// 1 uW per subcarrier. Subcarriers with p2,n = 0 contribute zero no matter
/// how much interference lands on them.
inline double achievable_rate(const ChannelSet& ch, const PowerAllocation& p1,
                              const PowerAllocation& p2) {
  detail::check_pair(ch, p1, p2);
  const std::size_t n = ch.n_subcarriers();
  double rate = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = p1.p[i] * ch.h21.gain_sq(i);
    const double b = p2.p[i] * ch.h22.gain_sq(i);
    rate += std::log2(1.0 + b / (1.0 + a));
  }
  return rate;
}

/// Total energy harvested at the EH receiver, uW. The noise term is dropped
/// as negligible and the harvester efficiency is unity.
inline double harvested_energy(const ChannelSet& ch, const PowerAllocation& p1,
                               const PowerAllocation& p2) {
  detail::check_pair(ch, p1, p2);
  const std::size_t n = ch.n_subcarriers();
  double energy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    energy += p1.p[i] * ch.h11.gain_sq(i) + p2.p[i] * ch.h12.gain_sq(i);
  }
  return energy;
}

/// Energy delivered to the EH receiver by the ID transmitter alone, uW.
inline double energy_from_id(const ChannelSet& ch, const PowerAllocation& p2) {
  if (p2.size() != ch.n_subcarriers())
    throw std::invalid_argument("allocation size does not match the channel");
  p2.validate();
  double energy = 0.0;
  for (std::size_t i = 0; i < p2.size(); ++i) {
    energy += p2.p[i] * ch.h12.gain_sq(i);
  }
  return energy;
}

}  // namespace swipt
