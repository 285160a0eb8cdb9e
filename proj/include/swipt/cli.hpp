// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "swipt/channel.hpp"
#include "swipt/config.hpp"
#include "swipt/metrics.hpp"
#include "swipt/optimizer.hpp"
#include "swipt/region.hpp"
#include "swipt/selection.hpp"

namespace swipt::cli {

/// One CSV row of an averaged rate-energy curve.
struct ResultRow {
  std::string strategy;
  double ebar_uw = 0.0;
  double avg_rate_bits = 0.0;
  double avg_energy_uw = 0.0;
  double feasible_fraction = 0.0;
  int trials = 0;
};

inline std::string format_value(double x) { return detail::format_double(x, 12); }

/// Writes `strategy,ebar_uW,avg_rate_bits,avg_energy_uW,feasible_fraction,trials`
/// rows with LF line ends and 12 significant digits.
inline void write_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  if (rows.empty()) throw std::invalid_argument("write_csv: no rows to write");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  out << "strategy,ebar_uW,avg_rate_bits,avg_energy_uW,feasible_fraction,trials\n";
  for (const ResultRow& r : rows) {
    out << r.strategy << ',' << format_value(r.ebar_uw) << ',' << format_value(r.avg_rate_bits)
        << ',' << format_value(r.avg_energy_uw) << ',' << format_value(r.feasible_fraction)
        << ',' << r.trials << '\n';
  }
  if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

inline std::vector<ResultRow> rows_from_curves(const std::vector<RECurve>& curves) {
  std::vector<ResultRow> rows;
  for (const RECurve& curve : curves) {
    for (const CurvePoint& cp : curve.points) {
      rows.push_back({std::string(strategy_name(curve.strategy)), cp.ebar, cp.point.rate,
                      cp.point.energy, cp.feasible_fraction, curve.trials});
    }
  }
  return rows;
}

/// Worker cap from SWIPT_SIM_THREADS (0 or unset = auto).
inline int threads_from_env() {
  const char* raw = std::getenv("SWIPT_SIM_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  int value = 0;
  const char* end = raw;
  while (*end != '\0') ++end;
  auto [ptr, ec] = std::from_chars(raw, end, value);
  if (ec != std::errc{} || ptr != end || value < 0)
    throw std::invalid_argument("SWIPT_SIM_THREADS must be a nonnegative integer");
  return value;
}

namespace checks {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string details;
};

/// Analytic per-subcarrier rate gradient against a central finite difference
/// of the full rate metric, on unit-scale instances where the difference
/// quotient is well conditioned.
inline CheckResult gradient_check(std::uint64_t seed, int instances) {
  double worst = 0.0;
  for (int i = 0; i < instances; ++i) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(i));
    const std::size_t n = 4;
    ChannelSet ch;
    for (DiagonalChannel* link : {&ch.h11, &ch.h12, &ch.h21, &ch.h22}) {
      link->gains.resize(n);
      for (auto& g : link->gains) g = rng.complex_gaussian();
    }
    const double budget = 100.0;
    PowerAllocation p1 = PowerAllocation::zeros(n, budget);
    PowerAllocation p2 = PowerAllocation::zeros(n, budget);
    for (std::size_t k = 0; k < n; ++k) {
      p1.p[k] = 0.1 + 10.0 * rng.uniform01();
      p2.p[k] = 0.1 + 10.0 * rng.uniform01();
    }
    const std::size_t n_bar = static_cast<std::size_t>(rng.uniform01() * n) % n;

    const double analytic = gradient_j(p1.p[n_bar], p2.p[n_bar], ch.h21.gain_sq(n_bar),
                                       ch.h22.gain_sq(n_bar));
    const double h = 1e-6;
    PowerAllocation hi = p1, lo = p1;
    hi.p[n_bar] += h;
    lo.p[n_bar] -= h;
    const double fd =
        (achievable_rate(ch, hi, p2) - achievable_rate(ch, lo, p2)) / (2.0 * h);
    const double rel = std::abs(analytic - fd) / std::max({std::abs(analytic), std::abs(fd), 1e-12});
    worst = std::max(worst, rel);
  }
  CheckResult res;
  res.name = "gradient vs finite differences";
  res.passed = worst <= 1e-5;
  res.details = "max relative error " + detail::format_double(worst, 3) + " over " +
                std::to_string(instances) + " instances";
  return res;
}

/// Budget and equal-water-level identities of the waterfilling solution.
inline CheckResult waterfill_kkt_check(std::uint64_t seed, int instances) {
  double worst_budget = 0.0, worst_level = 0.0;
  for (int i = 0; i < instances; ++i) {
    Rng rng = Rng::substream(seed ^ 0x5eedf00dULL, static_cast<std::uint64_t>(i));
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 15.0) % 15;
    std::vector<double> gains(n);
    for (auto& g : gains) {
      g = rng.uniform01() < 0.15 ? 0.0 : std::pow(10.0, -4.0 + 5.0 * rng.uniform01());
    }
    bool any = false;
    for (double g : gains) any |= g > 0.0;
    if (!any) gains[0] = 1.0;
    const double budget = std::pow(10.0, 5.0 * rng.uniform01());

    const PowerAllocation alloc = waterfill(gains, budget);
    worst_budget = std::max(worst_budget, std::abs(alloc.total() - budget) / budget);
    double level_min = std::numeric_limits<double>::infinity();
    double level_max = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      if (alloc.p[k] > 1e-12 * budget) {
        const double level = alloc.p[k] + 1.0 / gains[k];
        level_min = std::min(level_min, level);
        level_max = std::max(level_max, level);
      }
    }
    if (level_max > level_min) worst_level = std::max(worst_level, level_max - level_min);
  }
  CheckResult res;
  res.name = "waterfilling KKT";
  res.passed = worst_budget <= 1e-10 && worst_level <= 1e-8;
  res.details = "budget residual " + detail::format_double(worst_budget, 3) +
                ", water-level spread " + detail::format_double(worst_level, 3);
  return res;
}

/// Dual-solver certificates on constrained instances: nonnegative
/// multipliers, complementary slackness, tight budget, and the returned
/// allocation reproducing itself through the closed form.
inline CheckResult dual_check(std::uint64_t seed, int instances) {
  const AlgoConfig cfg;
  double worst_cs = 0.0, worst_budget = 0.0, worst_fixed = 0.0, worst_short = 0.0;
  for (int i = 0; i < instances; ++i) {
    Rng rng = Rng::substream(seed ^ 0xd0a1ULL, static_cast<std::uint64_t>(i));
    const std::size_t n = 2;
    ChannelSet ch;
    for (DiagonalChannel* link : {&ch.h11, &ch.h12, &ch.h21, &ch.h22}) {
      link->gains.resize(n);
      for (auto& g : link->gains) g = std::sqrt(0.05 + 2.0 * rng.uniform01());
    }
    const double budget = 50.0 + 100.0 * rng.uniform01();
    PowerAllocation p1 = PowerAllocation::zeros(n, budget);
    p1.p[0] = budget * rng.uniform01() * 0.5;

    std::vector<double> g12(n), g22(n);
    for (std::size_t k = 0; k < n; ++k) {
      g12[k] = ch.h12.gain_sq(k);
      g22[k] = ch.h22.gain_sq(k);
    }
    const PowerAllocation wf = waterfill(g22, budget);  // loose stand-in scale
    const double e12_wf = energy_from_id(ch, wf);
    const double e12_max = budget * std::max(g12[0], g12[1]);
    const double needed = e12_wf + (0.1 + 0.8 * rng.uniform01()) * (e12_max - e12_wf);

    const P2Solution sol = solve_p2_dual(ch, p1, needed, 0.0, budget, cfg);
    if (!sol.feasible) continue;
    const double e12 = energy_from_id(ch, sol.alloc);
    worst_short = std::max(worst_short, (needed - e12) / std::max(needed, 1.0));
    worst_cs = std::max(worst_cs, sol.dual.lambda * std::abs(e12 - needed) / std::max(needed, 1.0));
    worst_budget = std::max(worst_budget, std::abs(sol.alloc.total() - budget) / budget);

    std::vector<double> a(n, 0.0), replay(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) a[k] = p1.p[k] * ch.h21.gain_sq(k);
    swipt::detail::p2_closed_form(g22, g12, a, sol.dual.lambda, sol.dual.mu, budget, replay);
    for (std::size_t k = 0; k < n; ++k)
      worst_fixed = std::max(worst_fixed, std::abs(replay[k] - sol.alloc.p[k]));
  }
  CheckResult res;
  res.name = "dual solver certificates";
  res.passed = worst_cs <= 1e-4 && worst_budget <= 1e-6 && worst_fixed <= 1e-8 &&
               worst_short <= 1e-9;
  res.details = "complementary slackness " + detail::format_double(worst_cs, 3) +
                ", budget residual " + detail::format_double(worst_budget, 3) +
                ", closed-form replay " + detail::format_double(worst_fixed, 3);
  return res;
}

struct Prop1Summary {
  int realizations = 0;
  int m1_best = 0;
  std::vector<double> mean_best_rate;
  bool passed = false;
};

/// Single-subcarrier optimality sampled over an ensemble: at high SNR the
/// m = 1 brute-force rate should match the overall best almost always.
inline Prop1Summary prop1_summary(std::uint64_t seed, int realizations) {
  SimConfig cfg;
  cfg.n_subcarriers = 3;
  cfg.tap_count = 3;
  cfg.budget_uw = 1e5;
  constexpr int kMmax = 3, kGrid = 20;

  Prop1Summary s;
  s.realizations = realizations;
  s.mean_best_rate.assign(kMmax, 0.0);
  for (int r = 0; r < realizations; ++r) {
    Rng rng = Rng::substream(seed ^ 0x9107ULL, static_cast<std::uint64_t>(r));
    const ChannelSet ch = build_channel_set(cfg, rng);
    double max_g11 = 0.0;
    for (std::size_t i = 0; i < ch.n_subcarriers(); ++i)
      max_g11 = std::max(max_g11, ch.h11.gain_sq(i));
    const detail::SelectionView view = detail::make_selection_view(ch, cfg.budget_uw);
    const double ebar = view.e12_wf + 0.5 * cfg.budget_uw * max_g11;

    const Prop1Report report =
        verify_proposition1(ch, ebar, cfg.budget_uw, kMmax, kGrid, cfg.algo);
    for (int m = 0; m < kMmax; ++m) s.mean_best_rate[static_cast<std::size_t>(m)] +=
        report.m_feasible[static_cast<std::size_t>(m)] ? report.best_rate[static_cast<std::size_t>(m)] : 0.0;
    if (report.m_feasible[0] && report.best_rate[0] >= report.best_overall() - 1e-2) ++s.m1_best;
  }
  for (double& x : s.mean_best_rate) x /= std::max(1, realizations);
  s.passed = s.m1_best >= static_cast<int>(0.9 * realizations);
  return s;
}

}  // namespace checks

namespace detail_cli {

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::string> strategy;
};

inline SimConfig resolve_config(const CommonArgs& args) {
  SimConfig cfg;
  if (!args.config_path.empty()) cfg = load_config_file(args.config_path);
  if (args.seed) cfg.master_seed = *args.seed;
  if (args.trials) cfg.trials = *args.trials;
  if (args.strategy) {
    if (!parse_strategy(*args.strategy))
      throw std::invalid_argument("unknown strategy: " + *args.strategy);
    cfg.strategies = {*args.strategy};
  }
  cfg.validate();
  return cfg;
}

inline void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "key = value configuration file");
  cmd->add_option("--seed", args.seed, "master seed override");
  cmd->add_option("--trials", args.trials, "channel realizations override");
}

}  // namespace detail_cli

inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Rate-energy region simulator for a two-user OFDM interference channel "
               "with one energy-harvesting and one information-decoding receiver"};
  app.require_subcommand(1);

  detail_cli::CommonArgs region_args, point_args, verify_args, show_args;
  std::string region_out, point_strategy, region_strategy;
  double point_ebar = 0.0;
  int verify_instances = 1000;

  CLI::App* region = app.add_subcommand("region", "sweep averaged rate-energy curves to CSV");
  detail_cli::add_common(region, region_args);
  region->add_option("--out", region_out, "output CSV path")->required();
  region->add_option("--strategy", region_strategy, "restrict to a single strategy");

  CLI::App* point = app.add_subcommand("point", "solve one (strategy, ebar) point and print the trace");
  detail_cli::add_common(point, point_args);
  point->add_option("--strategy", point_strategy, "subcarrier selection strategy")->required();
  point->add_option("--ebar", point_ebar, "energy constraint in uW")->required();

  CLI::App* verify = app.add_subcommand("verify", "run the numerical property suites");
  detail_cli::add_common(verify, verify_args);
  verify->add_option("--instances", verify_instances, "instances per property check");

  CLI::App* show = app.add_subcommand("show-config", "echo the resolved configuration");
  detail_cli::add_common(show, show_args);
  show->add_option("--strategy", show_args.strategy, "restrict to a single strategy");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (region->parsed()) {
      if (!region_strategy.empty()) region_args.strategy = region_strategy;
      const SimConfig cfg = detail_cli::resolve_config(region_args);
      const std::vector<RECurve> curves = monte_carlo_region(cfg, threads_from_env());
      write_csv(rows_from_curves(curves), region_out);
      std::cout << "wrote " << curves.size() * static_cast<std::size_t>(cfg.ebar_points)
                << " rows to " << region_out << '\n';
      return 0;
    }

    if (point->parsed()) {
      point_args.strategy = point_strategy;
      const SimConfig cfg = detail_cli::resolve_config(point_args);
      if (!(point_ebar >= 0.0)) throw std::invalid_argument("--ebar must be >= 0");
      const Strategy strategy = *parse_strategy(point_strategy);

      Rng rng = Rng::substream(cfg.master_seed, 0);
      const ChannelSet ch = build_channel_set(cfg, rng);
      const detail::SelectionView view = detail::make_selection_view(ch, cfg.budget_uw);
      SelectionContext ctx{point_ebar, cfg.budget_uw, cfg.beta, view.e12_wf, view.unutilized};

      std::optional<std::size_t> n_bar;
      Algorithm1Result result;
      switch (strategy) {
        case Strategy::MaxCg: n_bar = select_maxcg(ch); break;
        case Strategy::MinCg: n_bar = select_mincg(ch); break;
        case Strategy::Sler: n_bar = select_sler(ch, ctx); break;
        case Strategy::Slrec: n_bar = select_slrec(ch, ctx); break;
        case Strategy::SlrecSharing: n_bar = select_slrec_sharing(ch, ctx); break;
        case Strategy::Exhaustive: break;
      }
      if (strategy == Strategy::Exhaustive) {
        result = exhaustive_search(ch, point_ebar, cfg.budget_uw, cfg.algo);
      } else if (n_bar.has_value()) {
        result = run_algorithm1(ch, *n_bar, point_ebar, cfg.budget_uw, cfg.algo);
      } else {
        std::cout << "strategy " << point_strategy << " ebar_uW " << format_value(point_ebar)
                  << "\nfeasible false (no subcarrier satisfies the energy constraint)\n";
        return 0;
      }

      std::cout << "strategy " << point_strategy << " ebar_uW " << format_value(point_ebar)
                << " n_bar " << result.n_bar << '\n'
                << "rate_bits " << format_value(result.point.rate) << " energy_uW "
                << format_value(result.point.energy) << " feasible "
                << (result.point.feasible ? "true" : "false") << " converged "
                << (result.converged ? "true" : "false") << " iterations "
                << result.trace.size() << '\n';
      std::cout << "iter p1_nbar rate_bits energy_uW lambda mu\n";
      for (std::size_t i = 0; i < result.trace.size(); ++i) {
        const IterationRecord& rec = result.trace[i];
        std::cout << i << ' ' << format_value(rec.p1_nbar) << ' ' << format_value(rec.rate)
                  << ' ' << format_value(rec.energy) << ' ' << format_value(rec.lambda) << ' '
                  << format_value(rec.mu) << '\n';
      }
      return 0;
    }

    if (verify->parsed()) {
      const SimConfig cfg = detail_cli::resolve_config(verify_args);
      if (verify_instances < 1) throw std::invalid_argument("--instances must be >= 1");
      const std::uint64_t seed = cfg.master_seed;

      std::vector<checks::CheckResult> results;
      results.push_back(checks::gradient_check(seed, verify_instances));
      results.push_back(checks::waterfill_kkt_check(seed, verify_instances));
      results.push_back(checks::dual_check(seed, std::max(1, verify_instances / 10)));

      const int prop1_runs = std::clamp(verify_instances / 20, 5, 50);
      const checks::Prop1Summary prop1 = checks::prop1_summary(seed, prop1_runs);

      bool all = true;
      for (const checks::CheckResult& r : results) {
        std::cout << (r.passed ? "[ok]   " : "[FAIL] ") << r.name << ": " << r.details << '\n';
        all &= r.passed;
      }
      std::cout << (prop1.passed ? "[ok]   " : "[FAIL] ")
                << "single-subcarrier optimality: m=1 best in " << prop1.m1_best << '/'
                << prop1.realizations << " realizations\n";
      std::cout << "mean best rate by EH subcarrier count:";
      for (std::size_t m = 0; m < prop1.mean_best_rate.size(); ++m) {
        std::cout << " m=" << m + 1 << ' ' << format_value(prop1.mean_best_rate[m]);
      }
      std::cout << '\n';
      all &= prop1.passed;
      return all ? 0 : 1;
    }

    if (show->parsed()) {
      const SimConfig cfg = detail_cli::resolve_config(show_args);
      std::cout << serialize_config(cfg);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

inline int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace swipt::cli
