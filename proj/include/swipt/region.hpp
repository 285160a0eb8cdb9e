// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "swipt/channel.hpp"
#include "swipt/config.hpp"
#include "swipt/metrics.hpp"
#include "swipt/optimizer.hpp"
#include "swipt/selection.hpp"

namespace swipt {

struct CurvePoint {
  double ebar = 0.0;
  REPoint point;
  double feasible_fraction = 0.0;
};

/// One rate-energy curve: samples ordered by increasing energy constraint,
/// averaged over `trials` channel realizations (1 for a single sweep).
struct RECurve {
  Strategy strategy = Strategy::MaxCg;
  std::vector<CurvePoint> points;
  int trials = 1;
};

/// Evenly spaced energy constraints from 0 to the largest energy this
/// realization can deliver (full EH power on the best |h11| subcarrier plus
/// the energy-greedy ID allocation).
inline std::vector<double> default_ebar_grid(const ChannelSet& ch, double budget, int points) {
  if (points < 1) throw std::invalid_argument("ebar grid needs at least one point");
  double max_g11 = 0.0, max_g12 = 0.0;
  for (std::size_t i = 0; i < ch.n_subcarriers(); ++i) {
    max_g11 = std::max(max_g11, ch.h11.gain_sq(i));
    max_g12 = std::max(max_g12, ch.h12.gain_sq(i));
  }
  const double emax = budget * (max_g11 + max_g12);
  std::vector<double> grid(static_cast<std::size_t>(points), 0.0);
  for (int k = 1; k < points; ++k) {
    grid[static_cast<std::size_t>(k)] =
        emax * static_cast<double>(k) / static_cast<double>(points - 1);
  }
  return grid;
}

namespace detail {

/// What the selectors get to see for one realization: the ID transmitter's
/// interference-free waterfilling allocation fixes both the E12 estimate and
/// the unutilized set Z. The simulator computes these omnisciently; a real
/// EH transmitter would need them signalled.
struct SelectionView {
  double e12_wf = 0.0;
  std::vector<std::size_t> unutilized;
};

inline SelectionView make_selection_view(const ChannelSet& ch, double budget) {
  const std::size_t n = ch.n_subcarriers();
  SelectionView view;
  std::vector<double> g22(n);
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    g22[i] = ch.h22.gain_sq(i);
    any |= g22[i] > 0.0;
  }
  if (!any) {
    for (std::size_t i = 0; i < n; ++i) view.unutilized.push_back(i);
    return view;
  }
  const PowerAllocation p2 = waterfill(g22, budget);
  view.e12_wf = energy_from_id(ch, p2);
  for (std::size_t i = 0; i < n; ++i) {
    if (p2.p[i] == 0.0) view.unutilized.push_back(i);
  }
  return view;
}

}  // namespace detail

/// Runs Algorithm 1 once per subcarrier and keeps the best feasible rate
/// (lowest index on ties). Models cooperating transmitters with global CSIT.
inline Algorithm1Result exhaustive_search(const ChannelSet& ch, double ebar, double budget,
                                          const AlgoConfig& cfg = {}) {
  const std::size_t n = ch.n_subcarriers();
  std::optional<Algorithm1Result> best;
  for (std::size_t n_bar = 0; n_bar < n; ++n_bar) {
    Algorithm1Result res = run_algorithm1(ch, n_bar, ebar, budget, cfg);
    if (!res.point.feasible) continue;
    if (!best || res.point.rate > best->point.rate) best = std::move(res);
  }
  if (best) return *std::move(best);
  return run_algorithm1(ch, 0, ebar, budget, cfg);  // uniformly infeasible
}

/// Traces one strategy's rate-energy curve over an increasing ebar grid on a
/// single realization. Selection is one-shot per ebar; the E12 estimate and
/// the unutilized set are recomputed from the interference-free waterfilling
/// allocation. Energy constraints the selector cannot satisfy yield
/// infeasible points rather than errors.
inline RECurve sweep_re_region(const ChannelSet& ch, Strategy strategy,
                               const std::vector<double>& ebar_grid, double budget,
                               const AlgoConfig& cfg = {}, double beta = 1.0) {
  if (ebar_grid.empty()) throw std::invalid_argument("ebar grid must be nonempty");
  for (std::size_t k = 1; k < ebar_grid.size(); ++k) {
    if (!(ebar_grid[k] > ebar_grid[k - 1]))
      throw std::invalid_argument("ebar grid must be strictly increasing");
  }
  const detail::SelectionView view = detail::make_selection_view(ch, budget);

  RECurve curve;
  curve.strategy = strategy;
  curve.trials = 1;
  curve.points.reserve(ebar_grid.size());
  for (double ebar : ebar_grid) {
    SelectionContext ctx;
    ctx.ebar = ebar;
    ctx.budget = budget;
    ctx.beta = beta;
    ctx.e12 = view.e12_wf;
    ctx.unutilized = view.unutilized;

    std::optional<std::size_t> n_bar;
    bool exhaustive = false;
    switch (strategy) {
      case Strategy::MaxCg: n_bar = select_maxcg(ch); break;
      case Strategy::MinCg: n_bar = select_mincg(ch); break;
      case Strategy::Sler: n_bar = select_sler(ch, ctx); break;
      case Strategy::Slrec: n_bar = select_slrec(ch, ctx); break;
      case Strategy::SlrecSharing: n_bar = select_slrec_sharing(ch, ctx); break;
      case Strategy::Exhaustive: exhaustive = true; break;
    }

    REPoint point;
    if (exhaustive) {
      point = exhaustive_search(ch, ebar, budget, cfg).point;
    } else if (n_bar.has_value()) {
      point = run_algorithm1(ch, *n_bar, ebar, budget, cfg).point;
    } else {
      point = REPoint{0.0, 0.0, false};
    }
    curve.points.push_back({ebar, point, point.feasible ? 1.0 : 0.0});
  }
  return curve;
}

/// Brute-force check of the single-subcarrier optimality claim: best
/// achievable rate when the EH transmitter is forced to spread power over
/// exactly m subcarriers, for m = 1..m_max.
struct Prop1Report {
  double ebar = 0.0;
  int m_max = 0;
  int grid_steps = 0;
  std::vector<double> best_rate;   ///< per m (1-based m at index m-1)
  std::vector<char> m_feasible;    ///< per m
  double zero_rate = 0.0;          ///< the P1 = 0 candidate, counted for every m
  bool zero_feasible = false;

  double best_overall() const {
    double best = zero_feasible ? zero_rate : -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < best_rate.size(); ++i) {
      if (m_feasible[i]) best = std::max(best, best_rate[i]);
    }
    return best;
  }
};

/// EH allocations are drawn from a grid: every subset S of size m, every
/// positive level tuple (l_1..l_m) with sum l <= grid_steps at powers
/// l_i * P / grid_steps, plus uniform spreads of tau * P over S and the
/// all-zero allocation. The ID side is solved exactly for each candidate, so
/// the report lower-bounds the true per-m optimum with resolution set by
/// grid_steps.
inline Prop1Report verify_proposition1(const ChannelSet& ch, double ebar, double budget,
                                       int m_max, int grid_steps,
                                       const AlgoConfig& cfg = {}) {
  const std::size_t n = ch.n_subcarriers();
  if (m_max < 1 || static_cast<std::size_t>(m_max) > n)
    throw std::invalid_argument("verify_proposition1: m_max must lie in [1, N]");
  if (grid_steps < 1) throw std::invalid_argument("verify_proposition1: grid_steps must be >= 1");

  std::vector<double> g11(n), g12(n), g21(n), g22(n);
  for (std::size_t i = 0; i < n; ++i) {
    g11[i] = ch.h11.gain_sq(i);
    g12[i] = ch.h12.gain_sq(i);
    g21[i] = ch.h21.gain_sq(i);
    g22[i] = ch.h22.gain_sq(i);
  }

  Prop1Report report;
  report.ebar = ebar;
  report.m_max = m_max;
  report.grid_steps = grid_steps;
  report.best_rate.assign(static_cast<std::size_t>(m_max), 0.0);
  report.m_feasible.assign(static_cast<std::size_t>(m_max), 0);

  std::vector<double> a(n, 0.0);
  std::vector<double> p1(n, 0.0);

  const auto evaluate = [&](const std::vector<std::size_t>& subset,
                            const std::vector<double>& powers, double& best, char& ok) {
    double e11 = 0.0;
    for (std::size_t k = 0; k < subset.size(); ++k) {
      p1[subset[k]] = powers[k];
      a[subset[k]] = powers[k] * g21[subset[k]];
      e11 += powers[k] * g11[subset[k]];
    }
    detail::P2CoreResult sol =
        detail::solve_p2_core(g22, g12, a, budget, ebar - e11, cfg);
    if (sol.feasible) {
      double rate = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        rate += std::log2(1.0 + g22[i] * sol.p[i] / (1.0 + a[i]));
      }
      if (!ok || rate > best) best = rate;
      ok = 1;
    }
    for (std::size_t idx : subset) {
      p1[idx] = 0.0;
      a[idx] = 0.0;
    }
  };

  // P1 = 0: available to every m (and the exact answer when ebar = 0).
  {
    char ok = 0;
    double rate = 0.0;
    evaluate({}, {}, rate, ok);
    report.zero_feasible = ok != 0;
    report.zero_rate = rate;
  }

  const double unit = budget / static_cast<double>(grid_steps);
  std::vector<std::size_t> subset;
  std::vector<double> powers;
  std::vector<int> levels;

  const auto enumerate_levels = [&](auto&& self, std::size_t depth, int remaining,
                                    double& best, char& ok) -> void {
    if (depth == subset.size()) {
      for (std::size_t k = 0; k < subset.size(); ++k)
        powers[k] = static_cast<double>(levels[k]) * unit;
      evaluate(subset, powers, best, ok);
      return;
    }
    const int slots_after = static_cast<int>(subset.size() - depth) - 1;
    for (int l = 1; l + slots_after <= remaining; ++l) {
      levels[depth] = l;
      self(self, depth + 1, remaining - l, best, ok);
    }
  };

  const auto enumerate_subsets = [&](auto&& self, std::size_t start, std::size_t m,
                                     double& best, char& ok) -> void {
    if (subset.size() == m) {
      levels.assign(m, 0);
      powers.assign(m, 0.0);
      enumerate_levels(enumerate_levels, 0, grid_steps, best, ok);
      // uniform spreads of tau * budget over the subset
      for (int tau = 1; tau <= grid_steps; ++tau) {
        const double share = static_cast<double>(tau) * unit / static_cast<double>(m);
        for (std::size_t k = 0; k < m; ++k) powers[k] = share;
        evaluate(subset, powers, best, ok);
      }
      return;
    }
    for (std::size_t i = start; i + (m - subset.size()) <= n; ++i) {
      subset.push_back(i);
      self(self, i + 1, m, best, ok);
      subset.pop_back();
    }
  };

  for (int m = 1; m <= m_max; ++m) {
    double best = 0.0;
    char ok = 0;
    if (report.zero_feasible) {
      best = report.zero_rate;
      ok = 1;
    }
    subset.clear();
    enumerate_subsets(enumerate_subsets, 0, static_cast<std::size_t>(m), best, ok);
    report.best_rate[static_cast<std::size_t>(m - 1)] = best;
    report.m_feasible[static_cast<std::size_t>(m - 1)] = ok;
  }
  return report;
}

namespace detail {

/// Index-parallel loop with dynamic scheduling; results must be written to
/// per-index slots so the outcome is independent of the interleaving.
template <typename Fn>
inline void parallel_for(std::size_t count, int threads, Fn&& fn) {
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = std::min<int>(workers, static_cast<int>(count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

/// Seeded ensemble of rate-energy curves: one channel realization per trial,
/// every configured strategy swept on the same per-trial grid, then averaged
/// pointwise (infeasible points excluded, their fraction recorded). Trials
/// run on independent substreams and reduce in trial order, so the result is
/// bit-identical for any worker count.
inline std::vector<RECurve> monte_carlo_region(const SimConfig& cfg, int threads = 0) {
  cfg.validate();
  std::vector<Strategy> strategies;
  strategies.reserve(cfg.strategies.size());
  for (const std::string& name : cfg.strategies) {
    const auto s = parse_strategy(name);
    if (!s) throw std::invalid_argument("unknown strategy: " + name);
    strategies.push_back(*s);
  }

  const auto trial_count = static_cast<std::size_t>(cfg.trials);
  std::vector<std::vector<RECurve>> per_trial(trial_count);
  detail::parallel_for(trial_count, threads, [&](std::size_t t) {
    Rng rng = Rng::substream(cfg.master_seed, t);
    const ChannelSet ch = build_channel_set(cfg, rng);
    const std::vector<double> grid = default_ebar_grid(ch, cfg.budget_uw, cfg.ebar_points);
    std::vector<RECurve>& curves = per_trial[t];
    curves.reserve(strategies.size());
    for (Strategy s : strategies) {
      curves.push_back(sweep_re_region(ch, s, grid, cfg.budget_uw, cfg.algo, cfg.beta));
    }
  });

  std::vector<RECurve> out;
  out.reserve(strategies.size());
  const auto points = static_cast<std::size_t>(cfg.ebar_points);
  for (std::size_t si = 0; si < strategies.size(); ++si) {
    RECurve curve;
    curve.strategy = strategies[si];
    curve.trials = cfg.trials;
    curve.points.resize(points);
    for (std::size_t k = 0; k < points; ++k) {
      double ebar_sum = 0.0, rate_sum = 0.0, energy_sum = 0.0;
      std::size_t feasible = 0;
      for (std::size_t t = 0; t < trial_count; ++t) {
        const CurvePoint& cp = per_trial[t][si].points[k];
        ebar_sum += cp.ebar;
        if (cp.point.feasible) {
          ++feasible;
          rate_sum += cp.point.rate;
          energy_sum += cp.point.energy;
        }
      }
      CurvePoint& avg = curve.points[k];
      avg.ebar = ebar_sum / static_cast<double>(trial_count);
      avg.feasible_fraction = static_cast<double>(feasible) / static_cast<double>(trial_count);
      avg.point.feasible = feasible > 0;
      avg.point.rate = feasible > 0 ? rate_sum / static_cast<double>(feasible) : 0.0;
      avg.point.energy = feasible > 0 ? energy_sum / static_cast<double>(feasible) : 0.0;
    }
    out.push_back(std::move(curve));
  }
  return out;
}

}  // namespace swipt
