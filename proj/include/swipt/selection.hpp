// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "swipt/channel.hpp"

namespace swipt {

/// Subcarrier selection strategies for the energy transmitter.
enum class Strategy {
  MaxCg,         ///< strongest own channel to the EH receiver
  MinCg,         ///< weakest leakage channel to the ID receiver
  Sler,          ///< signal-to-leakage-and-energy ratio
  Slrec,         ///< leakage ratio restricted to energy-feasible subcarriers
  SlrecSharing,  ///< SLREC preferring subcarriers unused by the ID transmitter
  Exhaustive,    ///< try every subcarrier, keep the best (global CSIT)
};

inline constexpr Strategy kAllStrategies[] = {
    Strategy::MaxCg, Strategy::MinCg,        Strategy::Sler,
    Strategy::Slrec, Strategy::SlrecSharing, Strategy::Exhaustive,
};

inline std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::MaxCg: return "maxcg";
    case Strategy::MinCg: return "mincg";
    case Strategy::Sler: return "sler";
    case Strategy::Slrec: return "slrec";
    case Strategy::SlrecSharing: return "slrec-sharing";
    case Strategy::Exhaustive: return "exhaustive";
  }
  return "unknown";
}

inline std::optional<Strategy> parse_strategy(std::string_view name) {
  for (Strategy s : kAllStrategies) {
    if (strategy_name(s) == name) return s;
  }
  return std::nullopt;
}

/// Inputs a selector may consult: the energy constraint, the budget, the
/// SLER regularizer, the estimate of the energy arriving from the ID
/// transmitter, and (for information sharing) the set Z of subcarriers the
/// ID transmitter leaves unused.
struct SelectionContext {
  double ebar = 0.0;
  double budget = 0.0;
  double beta = 1.0;
  double e12 = 0.0;
  std::optional<std::vector<std::size_t>> unutilized;
};

namespace detail {

// argmax with lowest-index tie break; `better(x, best)` must be a strict
// improvement test.
template <typename Score, typename Better>
std::size_t arg_best(std::size_t n, Score&& score, Better&& better) {
  std::size_t best = 0;
  auto best_score = score(0);
  for (std::size_t i = 1; i < n; ++i) {
    auto s = score(i);
    if (better(s, best_score)) {
      best = i;
      best_score = s;
    }
  }
  return best;
}

}  // namespace detail

/// argmax_n |h11,n|^2 (0-based; ties to the lowest index).
inline std::size_t select_maxcg(const ChannelSet& ch) {
  return detail::arg_best(
      ch.n_subcarriers(), [&](std::size_t n) { return ch.h11.gain_sq(n); },
      [](double s, double best) { return s > best; });
}

/// argmin_n |h21,n|^2.
inline std::size_t select_mincg(const ChannelSet& ch) {
  return detail::arg_best(
      ch.n_subcarriers(), [&](std::size_t n) { return ch.h21.gain_sq(n); },
      [](double s, double best) { return s < best; });
}

/// argmax_n of the signal-to-leakage-and-energy ratio
///   |h11,n|^2 / ( |h21,n|^2 + beta * max(ebar/P - |h11,n|^2, 0) ).
/// A vanishing denominator wins outright (the ratio's limit is +inf).
inline std::size_t select_sler(const ChannelSet& ch, const SelectionContext& ctx) {
  if (!(ctx.beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  if (!(ctx.budget > 0.0)) throw std::invalid_argument("budget must be positive");
  const double target = ctx.ebar / ctx.budget;
  const auto score = [&](std::size_t n) {
    const double own = ch.h11.gain_sq(n);
    const double deficit = target - own;
    const double denom = ch.h21.gain_sq(n) + ctx.beta * (deficit > 0.0 ? deficit : 0.0);
    if (denom == 0.0) return std::numeric_limits<double>::infinity();
    return own / denom;
  };
  return detail::arg_best(ch.n_subcarriers(), score,
                          [](double s, double best) { return s > best; });
}

namespace detail {

inline std::vector<std::size_t> slrec_candidates(const ChannelSet& ch,
                                                 const SelectionContext& ctx) {
  if (!(ctx.e12 >= 0.0)) throw std::invalid_argument("e12 must be >= 0");
  std::vector<std::size_t> out;
  const double required = ctx.ebar - ctx.e12;
  for (std::size_t n = 0; n < ch.n_subcarriers(); ++n) {
    if (ctx.budget * ch.h11.gain_sq(n) >= required) out.push_back(n);
  }
  return out;
}

inline std::size_t best_leakage_ratio(const ChannelSet& ch,
                                      const std::vector<std::size_t>& candidates) {
  std::size_t best = candidates.front();
  double best_score = -1.0;
  bool best_inf = false;
  for (std::size_t n : candidates) {
    const double num = ch.h11.gain_sq(n);
    const double den = ch.h21.gain_sq(n);
    if (den == 0.0) {
      if (!best_inf) {
        best_inf = true;
        best = n;
      }
      continue;
    }
    if (best_inf) continue;
    const double score = num / den;
    if (score > best_score) {
      best_score = score;
      best = n;
    }
  }
  return best;
}

}  // namespace detail

/// Two-stage rule: keep subcarriers able to meet the energy constraint
/// (P |h11,n|^2 >= ebar - e12), then maximize |h11,n|^2 / |h21,n|^2 among
/// them. An empty candidate set means no single subcarrier can satisfy the
/// constraint, reported as nullopt rather than an error.
inline std::optional<std::size_t> select_slrec(const ChannelSet& ch,
                                               const SelectionContext& ctx) {
  const auto candidates = detail::slrec_candidates(ch, ctx);
  if (candidates.empty()) return std::nullopt;
  return detail::best_leakage_ratio(ch, candidates);
}

/// SLREC with information sharing: if any energy-feasible subcarrier is
/// unused by the ID transmitter, take the one with the largest |h11,n|^2
/// (interference there is free); otherwise fall back to plain SLREC.
inline std::optional<std::size_t> select_slrec_sharing(const ChannelSet& ch,
                                                       const SelectionContext& ctx) {
  if (!ctx.unutilized.has_value())
    throw std::invalid_argument("slrec-sharing requires the unutilized set");
  const auto candidates = detail::slrec_candidates(ch, ctx);
  if (candidates.empty()) return std::nullopt;

  std::vector<std::uint8_t> in_z(ch.n_subcarriers(), 0);
  for (std::size_t n : *ctx.unutilized) {
    if (n >= in_z.size()) throw std::invalid_argument("unutilized index out of range");
    in_z[n] = 1;
  }
  bool have = false;
  std::size_t best = 0;
  double best_gain = -1.0;
  for (std::size_t n : candidates) {
    if (!in_z[n]) continue;
    const double gain = ch.h11.gain_sq(n);
    if (!have || gain > best_gain) {
      have = true;
      best = n;
      best_gain = gain;
    }
  }
  if (have) return best;
  return detail::best_leakage_ratio(ch, candidates);
}

/// Two-EH scenario: transmitter k pours its full budget on the subcarrier
/// maximizing the summed gain to both harvesting receivers.
inline std::size_t select_two_eh(const DiagonalChannel& to_rx1, const DiagonalChannel& to_rx2) {
  if (to_rx1.size() != to_rx2.size() || to_rx1.size() == 0)
    throw std::invalid_argument("gain vectors must be nonempty and equally sized");
  return detail::arg_best(
      to_rx1.size(),
      [&](std::size_t n) { return to_rx1.gain_sq(n) + to_rx2.gain_sq(n); },
      [](double s, double best) { return s > best; });
}

}  // namespace swipt
