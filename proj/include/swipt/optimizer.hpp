// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "swipt/config.hpp"
#include "swipt/metrics.hpp"

namespace swipt {

/// Multipliers of the ID power problem: lambda prices the harvested-energy
/// constraint, mu the transmit power budget. Wherever the closed-form
/// allocation is evaluated, mu > lambda * |h12,n|^2 holds on every live
/// subcarrier so the expression stays finite.
struct DualState {
  double lambda = 0.0;
  double mu = 0.0;
};

struct IterationRecord {
  double p1_nbar = 0.0;
  double rate = 0.0;
  double energy = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
};

using IterationTrace = std::vector<IterationRecord>;

namespace detail {

inline constexpr double kLn2 = std::numbers::ln2;

struct WfResult {
  std::vector<double> p;
  double level = 0.0;
};

/// Exact waterfilling over effective gains g: p_n = (w - 1/g_n)+ with the
/// water level solved in closed form on the active set found by scanning the
/// sorted inverse gains. Zero-gain subcarriers get nothing.
inline WfResult waterfill_impl(std::span<const double> gains, double budget) {
  if (!(budget > 0.0)) throw std::invalid_argument("waterfill: budget must be positive");
  std::vector<std::pair<double, std::size_t>> inv;  // (1/g, index), g > 0
  inv.reserve(gains.size());
  for (std::size_t n = 0; n < gains.size(); ++n) {
    if (!(gains[n] >= 0.0)) throw std::invalid_argument("waterfill: gains must be >= 0");
    if (gains[n] > 0.0) inv.emplace_back(1.0 / gains[n], n);
  }
  if (inv.empty()) throw std::invalid_argument("waterfill: all gains are zero");
  std::sort(inv.begin(), inv.end());

  double prefix = 0.0;
  double level = 0.0;
  std::size_t active = 0;
  for (std::size_t k = 1; k <= inv.size(); ++k) {
    prefix += inv[k - 1].first;
    const double w = (budget + prefix) / static_cast<double>(k);
    if (w > inv[k - 1].first && (k == inv.size() || w <= inv[k].first)) {
      level = w;
      active = k;
      break;
    }
  }
  // The scan always finds a level; keep the largest set as a fallback
  // against ties at the boundary.
  if (active == 0) {
    active = inv.size();
    level = (budget + prefix) / static_cast<double>(active);
  }

  WfResult out;
  out.p.assign(gains.size(), 0.0);
  double spent = 0.0;
  for (std::size_t k = 0; k < active; ++k) {
    const double p = level - inv[k].first;
    out.p[inv[k].second] = p > 0.0 ? p : 0.0;
    spent += out.p[inv[k].second];
  }
  // One exact correction of the linear identity sum p = budget.
  const double adjust = (budget - spent) / static_cast<double>(active);
  if (adjust != 0.0) {
    level += adjust;
    for (std::size_t k = 0; k < active; ++k) {
      const double p = level - inv[k].first;
      out.p[inv[k].second] = p > 0.0 ? p : 0.0;
    }
  }
  out.level = level;
  return out;
}

/// Bracketed scalar root: regula falsi with the Illinois cut and a bisection
/// fallback. Needs f(lo) and f(hi) of opposite sign; returns x with
/// |f(x)| <= ftol or a bracket narrower than xtol.
template <typename Fn>
inline double bracket_root(Fn&& f, double lo, double hi, double flo, double fhi,
                           double xtol, double ftol, int max_iter = 160) {
  if (std::abs(flo) <= ftol) return lo;
  if (std::abs(fhi) <= ftol) return hi;
  if (flo > 0.0) {
    std::swap(lo, hi);
    std::swap(flo, fhi);
  }
  int side = 0;
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < max_iter; ++iter) {
    const double denom = fhi - flo;
    double t = denom != 0.0 ? lo - flo * (hi - lo) / denom : 0.5 * (lo + hi);
    const double a = std::min(lo, hi), b = std::max(lo, hi);
    if (!(t > a && t < b)) t = 0.5 * (lo + hi);
    const double ft = f(t);
    x = t;
    if (std::abs(ft) <= ftol || std::abs(hi - lo) <= xtol) return t;
    if (ft > 0.0) {
      hi = t;
      fhi = ft;
      if (side == 1) flo *= 0.5;
      side = 1;
    } else {
      lo = t;
      flo = ft;
      if (side == -1) fhi *= 0.5;
      side = -1;
    }
  }
  return x;
}

struct P2CoreResult {
  std::vector<double> p;
  double lambda = 0.0;
  double mu = 0.0;
  bool feasible = true;
};

inline constexpr double kDualGuard = 1e-12;

/// Closed-form stationary allocation at fixed multipliers:
/// p_n = ( 1/(ln2 (mu - lambda g12_n)) - (1 + a_n)/g22_n )+, zero on
/// rate-dead subcarriers, clamped to the budget where the expression leaves
/// its domain (mu <= lambda g12_n + guard).
inline void p2_closed_form(std::span<const double> g22, std::span<const double> g12,
                           std::span<const double> a, double lambda, double mu,
                           double budget, std::vector<double>& out) {
  const std::size_t n = g22.size();
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(g22[i] > 0.0)) {
      out[i] = 0.0;
      continue;
    }
    const double d = mu - lambda * g12[i];
    if (d <= kDualGuard) {
      out[i] = budget;
      continue;
    }
    const double gamma = 1.0 / (kLn2 * d);
    const double c = (1.0 + a[i]) / g22[i];
    out[i] = gamma > c ? gamma - c : 0.0;
  }
}

inline double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double sum(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

/// For fixed lambda, solves sum_n p_n(mu) = budget for mu by bracketed root
/// finding over the dual domain (mu above lambda * max live g12). Fills
/// `p` with the allocation at the returned mu.
inline double solve_mu(std::span<const double> g22, std::span<const double> g12,
                       std::span<const double> a, double budget, double lambda,
                       std::vector<double>& p) {
  double floor = 0.0;
  for (std::size_t i = 0; i < g22.size(); ++i) {
    if (g22[i] > 0.0) floor = std::max(floor, lambda * g12[i]);
  }
  const double lo = floor + std::max(floor, 1e-300) * 1e-15;
  const double hi = floor + 2.0 * static_cast<double>(g22.size()) / (kLn2 * budget);
  const auto excess = [&](double mu) {
    p2_closed_form(g22, g12, a, lambda, mu, budget, p);
    return sum(p) - budget;
  };
  const double flo = excess(lo);
  if (flo <= 0.0) {
    // Budget cannot be filled inside the domain (possible only when the
    // floor-achieving subcarrier is rate-dead): park the remainder on the
    // strongest |h12|^2 subcarrier, where it costs no rate.
    std::size_t j = 0;
    for (std::size_t i = 1; i < g12.size(); ++i) {
      if (g12[i] > g12[j]) j = i;
    }
    p[j] += budget - sum(p);
    return lo;
  }
  const double fhi = excess(hi);
  const double mu = bracket_root(excess, lo, hi, flo, fhi, 1e-15 * hi, 1e-12 * budget);
  excess(mu);  // leave `p` evaluated at the returned multiplier
  return mu;
}

/// Maximizes sum_n log2(1 + g22_n p_n / (1 + a_n)) over p >= 0 subject to
/// sum p <= budget and sum_n p_n g12_n >= needed.
///
/// Structure: the lambda = 0 waterfilling solution settles slack instances;
/// otherwise the multipliers start from the pinned projected-subgradient
/// schedule (step0/sqrt(t), lambda from 0, mu from the water level) and are
/// then tightened by nested root finding -- mu clears the budget at fixed
/// lambda, lambda clears the energy constraint -- so the returned triples
/// satisfy complementary slackness and reproduce themselves through the
/// closed form at machine-level tolerances.
inline P2CoreResult solve_p2_core(std::span<const double> g22, std::span<const double> g12,
                                  std::span<const double> a, double budget, double needed,
                                  const AlgoConfig& cfg) {
  const std::size_t n = g22.size();
  P2CoreResult res;
  res.p.assign(n, 0.0);

  bool any_live = false;
  double max_g12_all = 0.0, max_g12_live = 0.0;
  std::size_t argmax_g12 = 0;
  std::vector<double> geff(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (g12[i] > max_g12_all) {
      max_g12_all = g12[i];
      argmax_g12 = i;
    }
    if (g22[i] > 0.0) {
      any_live = true;
      geff[i] = g22[i] / (1.0 + a[i]);
      max_g12_live = std::max(max_g12_live, g12[i]);
    }
  }

  if (!any_live) {
    // No rate anywhere; spend power only if energy is demanded.
    if (needed <= 0.0) return res;
    if (!(max_g12_all > 0.0) || needed > budget * max_g12_all * (1.0 + 1e-12)) {
      res.feasible = false;
      return res;
    }
    res.p[argmax_g12] = std::min(budget, needed / max_g12_all);
    return res;
  }

  WfResult wf = waterfill_impl(geff, budget);
  const double e12_wf = dot(wf.p, g12);
  const double mu0 = 1.0 / (kLn2 * wf.level);
  if (needed <= e12_wf) {
    res.p = std::move(wf.p);
    res.mu = mu0;
    return res;
  }
  if (needed > budget * max_g12_all * (1.0 + 1e-12)) {
    res.feasible = false;
    return res;
  }

  const double sup_live = budget * max_g12_live;
  if (needed > sup_live) {
    // Only a rate-dead subcarrier can carry this much energy. Cover the
    // deficit there and waterfill what is left; the stationarity form is
    // singular at this corner, so the duals stay at their slack values.
    const double p_dead = std::min(budget, needed / max_g12_all);
    res.p[argmax_g12] = p_dead;
    const double rest = budget - p_dead;
    if (rest > 0.0) {
      WfResult tail = waterfill_impl(geff, rest);
      for (std::size_t i = 0; i < n; ++i) {
        if (i != argmax_g12) res.p[i] += tail.p[i];
      }
      res.mu = 1.0 / (kLn2 * tail.level);
    }
    return res;
  }

  const double target = std::min(needed, sup_live * (1.0 - 1e-13));
  const double e_scale = std::max(target, 1.0);
  const double lam_unit = mu0 / max_g12_live;

  // Projected subgradient warm start on (lambda, mu).
  double lam_hint = 0.0;
  {
    double lambda = 0.0, mu = mu0;
    double best_gap = std::numeric_limits<double>::infinity();
    std::vector<double> p(n);
    for (int t = 1; t <= cfg.subgrad_iters; ++t) {
      p2_closed_form(g22, g12, a, lambda, mu, budget, p);
      const double e12 = dot(p, g12);
      const double trp = sum(p);
      const double gap = std::abs(e12 - target) / e_scale + std::abs(budget - trp) / budget;
      if (gap < best_gap) {
        best_gap = gap;
        lam_hint = lambda;
      }
      if (gap < cfg.tol_dual) break;
      const double step = cfg.subgrad_step0 / std::sqrt(static_cast<double>(t));
      lambda = std::max(0.0, lambda - step * lam_unit * (e12 - target) / e_scale);
      mu = std::max(0.0, mu - step * mu0 * (budget - trp) / budget);
    }
  }

  // Energy price: smallest lambda whose budget-cleared allocation delivers
  // the target. e12(lambda) grows toward budget * max live g12, so the
  // bracket below always closes for target < sup_live.
  std::vector<double> p_work(n);
  double mu_at = 0.0;
  const auto e12_at = [&](double lambda) {
    mu_at = solve_mu(g22, g12, a, budget, lambda, p_work);
    return dot(p_work, g12) - target;
  };

  double lo = 0.0, flo = e12_wf - target;
  double hi = std::max(lam_hint, lam_unit);
  double fhi = e12_at(hi);
  for (int k = 0; k < 300 && fhi < 0.0; ++k) {
    lo = hi;
    flo = fhi;
    hi *= 4.0;
    fhi = e12_at(hi);
  }

  const double ftol = 1e-10 * e_scale;
  double lambda = hi;
  if (fhi >= 0.0) {
    const double root = bracket_root(e12_at, lo, hi, flo, fhi, 1e-13 * hi, ftol);
    lambda = (e12_at(root) >= -ftol) ? root : hi;  // stay on the feasible side
  }
  e12_at(lambda);  // leave p_work and mu_at evaluated at the returned price

  res.p = p_work;
  res.lambda = lambda;
  res.mu = mu_at;
  return res;
}

}  // namespace detail

/// Single-user waterfilling: maximizes sum log2(1 + g_n p_n) subject to the
/// power budget. Subcarriers sharing the active set sit at a common water
/// level p_n + 1/g_n.
inline PowerAllocation waterfill(const std::vector<double>& effective_gains, double budget) {
  detail::WfResult wf = detail::waterfill_impl(effective_gains, budget);
  return {std::move(wf.p), budget};
}

/// Marginal achievable-rate change per unit of EH power on one subcarrier:
///   (1/ln2) [ (1 + p1 g21 + p2 g22)^-1 - (1 + p1 g21)^-1 ] g21,
/// with g21 = |h21,n|^2 and g22 = |h22,n|^2. Never positive.
inline double gradient_j(double p1_n, double p2_n, double g21_n, double g22_n) {
  const double base = 1.0 + p1_n * g21_n;
  return (1.0 / (base + p2_n * g22_n) - 1.0 / base) * g21_n / detail::kLn2;
}

/// Largest EH power step that keeps the harvested energy at or above ebar:
///   (ebar - E(P1, P2)) / (grad |h11,nbar|^2).
/// Both factors are negative while the algorithm is shedding surplus, so the
/// cap is nonnegative there.
inline double max_step(const ChannelSet& ch, const PowerAllocation& p1,
                       const PowerAllocation& p2, double ebar, double grad,
                       std::size_t n_bar) {
  if (grad == 0.0)
    throw std::invalid_argument("max_step: zero gradient (substitute alpha first)");
  if (n_bar >= ch.n_subcarriers()) throw std::invalid_argument("max_step: bad subcarrier");
  const double energy = harvested_energy(ch, p1, p2);
  return (ebar - energy) / (grad * ch.h11.gain_sq(n_bar));
}

struct P2Solution {
  PowerAllocation alloc;
  DualState dual;
  bool feasible = true;
};

/// Best ID power allocation for a fixed EH allocation: maximizes the rate
/// subject to tr(P2) <= budget and an energy floor of ebar - e11 delivered
/// through h12. Slack instances reduce to plain waterfilling with
/// lambda = 0; an energy floor beyond budget * max |h12,n|^2 is infeasible.
inline P2Solution solve_p2_dual(const ChannelSet& ch, const PowerAllocation& p1,
                                double ebar, double e11, double budget,
                                const AlgoConfig& cfg = {}) {
  const std::size_t n = ch.n_subcarriers();
  if (p1.size() != n) throw std::invalid_argument("allocation size does not match the channel");
  p1.validate();
  if (!(budget > 0.0)) throw std::invalid_argument("budget must be positive");
  if (!(ebar >= 0.0)) throw std::invalid_argument("ebar must be >= 0");

  std::vector<double> g22(n), g12(n), a(n);
  for (std::size_t i = 0; i < n; ++i) {
    g22[i] = ch.h22.gain_sq(i);
    g12[i] = ch.h12.gain_sq(i);
    a[i] = p1.p[i] * ch.h21.gain_sq(i);
  }
  detail::P2CoreResult core = detail::solve_p2_core(g22, g12, a, budget, ebar - e11, cfg);
  P2Solution out;
  out.alloc = PowerAllocation{std::move(core.p), budget};
  out.dual = DualState{core.lambda, core.mu};
  out.feasible = core.feasible;
  return out;
}

struct Algorithm1Result {
  REPoint point;
  PowerAllocation p1;
  PowerAllocation p2;
  DualState dual;
  IterationTrace trace;
  bool converged = false;
  std::size_t n_bar = 0;
};

/// Traces one boundary point of the rate-energy region for a fixed EH
/// subcarrier: the EH transmitter starts at full power and monotonically
/// sheds it, first burning surplus energy along the paper's capped gradient
/// steps, then -- once the energy constraint binds -- continuing only while
/// the envelope direction grad + lambda |h11,nbar|^2 still improves the
/// constrained rate (verified by re-solving the ID side before accepting a
/// step). Infeasible constraints are reported, not thrown.
inline Algorithm1Result run_algorithm1(const ChannelSet& ch, std::size_t n_bar, double ebar,
                                       double budget, const AlgoConfig& cfg = {}) {
  const std::size_t n = ch.n_subcarriers();
  if (n_bar >= n) throw std::invalid_argument("run_algorithm1: bad subcarrier index");
  if (!(ebar >= 0.0)) throw std::invalid_argument("run_algorithm1: ebar must be >= 0");
  if (!(budget > 0.0)) throw std::invalid_argument("run_algorithm1: budget must be positive");
  cfg.validate();

  std::vector<double> g11(n), g12(n), g21(n), g22(n);
  double max_g12 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    g11[i] = ch.h11.gain_sq(i);
    g12[i] = ch.h12.gain_sq(i);
    g21[i] = ch.h21.gain_sq(i);
    g22[i] = ch.h22.gain_sq(i);
    max_g12 = std::max(max_g12, g12[i]);
  }

  Algorithm1Result out;
  out.n_bar = n_bar;
  out.p1 = PowerAllocation::zeros(n, budget);
  out.p2 = PowerAllocation::zeros(n, budget);

  const double eps_e = 1e-9 * std::max(ebar, 1.0);
  if (ebar > budget * g11[n_bar] + budget * max_g12 + eps_e) {
    out.point = REPoint{0.0, 0.0, false};
    out.converged = true;
    return out;
  }

  std::vector<double> a(n, 0.0);
  const auto solve_at = [&](double p1v) {
    a[n_bar] = p1v * g21[n_bar];
    return detail::solve_p2_core(g22, g12, a, budget, ebar - p1v * g11[n_bar], cfg);
  };
  const auto rate_of = [&](double p1v, const std::vector<double>& p2) {
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ai = i == n_bar ? p1v * g21[n_bar] : 0.0;
      r += std::log2(1.0 + g22[i] * p2[i] / (1.0 + ai));
    }
    return r;
  };

  double p1v = budget;
  double prev_rate = std::numeric_limits<double>::quiet_NaN();
  double last_step = std::numeric_limits<double>::infinity();
  const double step_floor = 1e-7 * budget;

  detail::P2CoreResult sol;
  double rate = 0.0, total = 0.0;
  for (int iter = 0; iter < cfg.i_max; ++iter) {
    sol = solve_at(p1v);
    if (!sol.feasible) {
      out.point = REPoint{0.0, 0.0, false};
      out.converged = true;
      return out;
    }
    rate = rate_of(p1v, sol.p);
    total = p1v * g11[n_bar] + detail::dot(sol.p, g12);
    out.trace.push_back({p1v, rate, total, sol.lambda, sol.mu});

    if (!std::isnan(prev_rate) && std::abs(rate - prev_rate) < cfg.tol_rate &&
        last_step <= 1e-12 * budget) {
      out.converged = true;
      break;
    }
    prev_rate = rate;

    double p1_new = p1v;
    if (total > ebar + eps_e) {
      // Surplus energy: capped steepest descent on the EH power.
      double grad = gradient_j(p1v, sol.p[n_bar], g21[n_bar], g22[n_bar]);
      if (grad == 0.0) grad = cfg.alpha;
      const double dmax = (ebar - total) / (grad * g11[n_bar]);
      const double step = std::min(cfg.delta_frac * budget, dmax * (-grad));
      p1_new = std::min(budget, std::max(0.0, p1v - step));
    } else if (p1v > 0.0) {
      // Constraint active: trading EH power for ID-carried energy pays only
      // while the envelope direction is negative.
      const double grad = gradient_j(p1v, sol.p[n_bar], g21[n_bar], g22[n_bar]);
      if (grad + sol.lambda * g11[n_bar] < 0.0) {
        double delta = std::min(cfg.delta_frac * budget, p1v);
        while (delta >= step_floor) {
          const double p_try = p1v - delta;
          detail::P2CoreResult trial = solve_at(p_try);
          if (trial.feasible) {
            const double rate_try = rate_of(p_try, trial.p);
            if (rate_try >= rate - 1e-12 * std::max(1.0, std::abs(rate))) {
              p1_new = p_try;
              break;
            }
          }
          delta *= 0.5;
        }
      }
    }
    last_step = p1v - p1_new;
    p1v = p1_new;
  }

  out.p1.p[n_bar] = p1v;
  out.p2.p = sol.p;
  out.dual = DualState{sol.lambda, sol.mu};
  out.point.rate = achievable_rate(ch, out.p1, out.p2);
  out.point.energy = harvested_energy(ch, out.p1, out.p2);
  out.point.feasible = true;
  return out;
}

struct NashResult {
  PowerAllocation p1;
  PowerAllocation p2;
  bool converged = false;
  int iterations = 0;
};

/// Two-ID baseline: alternating best-response waterfilling against the other
/// user's interference until the allocations stop moving (Nash equilibrium)
/// or the iteration cap is hit.
inline NashResult iterative_waterfilling_2id(const ChannelSet& ch, double budget,
                                             const AlgoConfig& cfg = {}) {
  const std::size_t n = ch.n_subcarriers();
  std::vector<double> g11(n), g12(n), g21(n), g22(n);
  bool live1 = false, live2 = false;
  for (std::size_t i = 0; i < n; ++i) {
    g11[i] = ch.h11.gain_sq(i);
    g12[i] = ch.h12.gain_sq(i);
    g21[i] = ch.h21.gain_sq(i);
    g22[i] = ch.h22.gain_sq(i);
    live1 |= g11[i] > 0.0;
    live2 |= g22[i] > 0.0;
  }
  if (!live1 || !live2)
    throw std::invalid_argument("iterative_waterfilling_2id: a direct link is all zero");

  NashResult out;
  out.p1 = PowerAllocation::zeros(n, budget);
  out.p2 = PowerAllocation::zeros(n, budget);
  const double tol = cfg.tol_dual * budget;
  std::vector<double> geff(n);

  for (int iter = 1; iter <= cfg.i_max; ++iter) {
    double moved = 0.0;
    for (std::size_t i = 0; i < n; ++i) geff[i] = g11[i] / (1.0 + out.p2.p[i] * g12[i]);
    detail::WfResult r1 = detail::waterfill_impl(geff, budget);
    for (std::size_t i = 0; i < n; ++i) moved = std::max(moved, std::abs(r1.p[i] - out.p1.p[i]));
    out.p1.p = std::move(r1.p);

    for (std::size_t i = 0; i < n; ++i) geff[i] = g22[i] / (1.0 + out.p1.p[i] * g21[i]);
    detail::WfResult r2 = detail::waterfill_impl(geff, budget);
    for (std::size_t i = 0; i < n; ++i) moved = std::max(moved, std::abs(r2.p[i] - out.p2.p[i]));
    out.p2.p = std::move(r2.p);

    out.iterations = iter;
    if (moved < tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace swipt
