// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace swipt {

/// Solver knobs: descent step policy, dual subgradient schedule and the
/// convergence tolerances shared by the iterative algorithms.
struct AlgoConfig {
  int i_max = 500;               ///< outer iteration cap
  double delta_frac = 0.05;      ///< descent step as a fraction of the budget
  double alpha = -1e-3;          ///< gradient substitute on flat subcarriers
  double tol_rate = 1e-6;        ///< bits
  double tol_energy_rel = 1e-4;  ///< relative to max(ebar, 1) uW
  double tol_dual = 1e-9;
  double subgrad_step0 = 1.0;    ///< initial dual subgradient step
  int subgrad_iters = 120;       ///< dual subgradient warm-start iterations

  void validate() const {
    if (i_max < 1) throw std::invalid_argument("i_max must be >= 1");
    if (!(alpha < 0.0)) throw std::invalid_argument("alpha must be negative");
    if (!(delta_frac > 0.0)) throw std::invalid_argument("delta_frac must be positive");
    if (!(tol_rate > 0.0) || !(tol_energy_rel > 0.0) || !(tol_dual > 0.0))
      throw std::invalid_argument("tolerances must be positive");
    if (!(subgrad_step0 > 0.0)) throw std::invalid_argument("subgrad_step0 must be positive");
    if (subgrad_iters < 1) throw std::invalid_argument("subgrad_iters must be >= 1");
  }
};

/// Full experiment description. All powers are tracked in uW so the
/// 1 uW per-subcarrier noise floor maps to unit SNR scaling; the 50 mW
/// budget enters as 5e4 uW.
struct SimConfig {
  int n_subcarriers = 8;
  int tap_count = 3;
  double tap_decay = 1.0;
  double pathloss_power = 1e-3;  ///< power attenuation of the direct links
  double delta_cross = 0.8;      ///< cross-link power relative to direct, in [0,1]
  double budget_uw = 5e4;        ///< per-transmitter transmit power P, uW
  double noise_uw = 1.0;         ///< per-subcarrier noise power; fixed normalization
  double zeta = 1.0;             ///< harvester efficiency; fixed
  double beta = 1.0;             ///< SLER regularizer
  AlgoConfig algo;
  int trials = 100;
  int ebar_points = 40;
  std::uint64_t master_seed = 1;
  std::vector<std::string> strategies = {"maxcg",  "mincg",         "sler",
                                         "slrec",  "slrec-sharing", "exhaustive"};

  /// Amplitude factor applied to every channel coefficient.
  double pathloss_amp() const { return std::sqrt(pathloss_power); }

  void validate() const {
    if (n_subcarriers < 1) throw std::invalid_argument("n_subcarriers must be >= 1");
    if (tap_count < 1) throw std::invalid_argument("tap_count must be >= 1");
    if (n_subcarriers < tap_count)
      throw std::invalid_argument("n_subcarriers must be >= tap_count");
    if (!(tap_decay > 0.0)) throw std::invalid_argument("tap_decay must be positive");
    if (!(pathloss_power > 0.0)) throw std::invalid_argument("pathloss_power must be positive");
    if (delta_cross < 0.0 || delta_cross > 1.0)
      throw std::invalid_argument("delta_cross must lie in [0,1]");
    if (!(budget_uw > 0.0)) throw std::invalid_argument("budget_uw must be positive");
    if (noise_uw != 1.0)
      throw std::invalid_argument("noise_uw is a fixed normalization and must be 1");
    if (zeta != 1.0) throw std::invalid_argument("zeta is fixed at 1");
    if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (ebar_points < 1) throw std::invalid_argument("ebar_points must be >= 1");
    if (strategies.empty()) throw std::invalid_argument("strategies must be nonempty");
    algo.validate();
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline double parse_double(std::string_view v, const std::string& key) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw std::invalid_argument("config: bad numeric value for '" + key + "'");
  return out;
}

inline long long parse_int(std::string_view v, const std::string& key) {
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw std::invalid_argument("config: bad integer value for '" + key + "'");
  return out;
}

inline std::uint64_t parse_u64(std::string_view v, const std::string& key) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw std::invalid_argument("config: bad unsigned value for '" + key + "'");
  return out;
}

inline std::string format_double(double x, int precision = 17) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x,
                                 std::chars_format::general, precision);
  if (ec != std::errc{}) throw std::runtime_error("double formatting failed");
  return std::string(buf, ptr);
}

}  // namespace detail

/// Applies one `key = value` pair to a config.
inline void apply_config_key(SimConfig& cfg, const std::string& key, std::string_view value) {
  using detail::parse_double;
  using detail::parse_int;
  using detail::parse_u64;
  if (key == "n_subcarriers") cfg.n_subcarriers = static_cast<int>(parse_int(value, key));
  else if (key == "tap_count") cfg.tap_count = static_cast<int>(parse_int(value, key));
  else if (key == "tap_decay") cfg.tap_decay = parse_double(value, key);
  else if (key == "pathloss_power") cfg.pathloss_power = parse_double(value, key);
  else if (key == "delta_cross") cfg.delta_cross = parse_double(value, key);
  else if (key == "budget_uw") cfg.budget_uw = parse_double(value, key);
  else if (key == "noise_uw") cfg.noise_uw = parse_double(value, key);
  else if (key == "zeta") cfg.zeta = parse_double(value, key);
  else if (key == "beta") cfg.beta = parse_double(value, key);
  else if (key == "alpha") cfg.algo.alpha = parse_double(value, key);
  else if (key == "delta_frac") cfg.algo.delta_frac = parse_double(value, key);
  else if (key == "i_max") cfg.algo.i_max = static_cast<int>(parse_int(value, key));
  else if (key == "tol_rate") cfg.algo.tol_rate = parse_double(value, key);
  else if (key == "tol_energy_rel") cfg.algo.tol_energy_rel = parse_double(value, key);
  else if (key == "tol_dual") cfg.algo.tol_dual = parse_double(value, key);
  else if (key == "subgrad_step0") cfg.algo.subgrad_step0 = parse_double(value, key);
  else if (key == "subgrad_iters") cfg.algo.subgrad_iters = static_cast<int>(parse_int(value, key));
  else if (key == "trials") cfg.trials = static_cast<int>(parse_int(value, key));
  else if (key == "ebar_points") cfg.ebar_points = static_cast<int>(parse_int(value, key));
  else if (key == "master_seed") cfg.master_seed = parse_u64(value, key);
  else if (key == "strategies") {
    cfg.strategies.clear();
    std::string_view rest = value;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      std::string_view item = detail::trim(rest.substr(0, comma));
      if (!item.empty()) cfg.strategies.emplace_back(item);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cfg.strategies.empty()) throw std::invalid_argument("config: empty strategies list");
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

/// Parses flat `key = value` text with `#` comments.
inline SimConfig parse_config_text(std::string_view text, SimConfig base = {}) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("config: line " + std::to_string(line_no) + " is not 'key = value'");
    const std::string key{detail::trim(line.substr(0, eq))};
    const std::string_view value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("config: empty key on line " + std::to_string(line_no));
    apply_config_key(base, key, value);
  }
  return base;
}

inline SimConfig load_config_file(const std::string& path, SimConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), std::move(base));
}

/// Emits the config in the same `key = value` format accepted by the parser;
/// doubles carry 17 significant digits so the echo round-trips exactly.
inline std::string serialize_config(const SimConfig& cfg) {
  using detail::format_double;
  std::ostringstream out;
  out << "n_subcarriers = " << cfg.n_subcarriers << '\n'
      << "tap_count = " << cfg.tap_count << '\n'
      << "tap_decay = " << format_double(cfg.tap_decay) << '\n'
      << "pathloss_power = " << format_double(cfg.pathloss_power) << '\n'
      << "delta_cross = " << format_double(cfg.delta_cross) << '\n'
      << "budget_uw = " << format_double(cfg.budget_uw) << '\n'
      << "noise_uw = " << format_double(cfg.noise_uw) << '\n'
      << "zeta = " << format_double(cfg.zeta) << '\n'
      << "beta = " << format_double(cfg.beta) << '\n'
      << "alpha = " << format_double(cfg.algo.alpha) << '\n'
      << "delta_frac = " << format_double(cfg.algo.delta_frac) << '\n'
      << "i_max = " << cfg.algo.i_max << '\n'
      << "tol_rate = " << format_double(cfg.algo.tol_rate) << '\n'
      << "tol_energy_rel = " << format_double(cfg.algo.tol_energy_rel) << '\n'
      << "tol_dual = " << format_double(cfg.algo.tol_dual) << '\n'
      << "subgrad_step0 = " << format_double(cfg.algo.subgrad_step0) << '\n'
      << "subgrad_iters = " << cfg.algo.subgrad_iters << '\n'
      << "trials = " << cfg.trials << '\n'
      << "ebar_points = " << cfg.ebar_points << '\n'
      << "master_seed = " << cfg.master_seed << '\n';
  out << "strategies = ";
  for (std::size_t i = 0; i < cfg.strategies.size(); ++i) {
    if (i) out << ',';
    out << cfg.strategies[i];
  }
  out << '\n';
  return out.str();
}

}  // namespace swipt
