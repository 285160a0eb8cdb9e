// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "swipt/channel.hpp"

using namespace swipt;
using Catch::Approx;

TEST_CASE("tap variances: normalized exponential profile", "[channel]") {
  const auto single = tap_variances(1, 3.7);
  REQUIRE(single.size() == 1);
  REQUIRE(single[0] == Approx(1.0).margin(1e-15));

  const auto three = tap_variances(3, 1.0);
  const double sum = three[0] + three[1] + three[2];
  REQUIRE(sum == Approx(1.0).margin(1e-12));
  REQUIRE(three[0] / three[1] == Approx(std::exp(1.0)).epsilon(1e-12));
  REQUIRE(three[1] / three[2] == Approx(std::exp(1.0)).epsilon(1e-12));
}

TEST_CASE("tap generation rejects bad parameters", "[channel]") {
  Rng rng(1);
  REQUIRE_THROWS_AS(generate_taps(rng, 0, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(generate_taps(rng, 3, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(generate_taps(rng, 3, -1.0), std::invalid_argument);
}

TEST_CASE("tap power concentrates around 1 over many draws", "[channel]") {
  Rng rng(42);
  const int draws = 100000;
  double total = 0.0;
  for (int i = 0; i < draws; ++i) {
    const TapVector t = generate_taps(rng, 3, 1.0);
    for (const auto& tap : t.taps) total += std::norm(tap);
  }
  const double mean = total / draws;
  REQUIRE(mean > 0.98);
  REQUIRE(mean < 1.02);
}

TEST_CASE("single unit tap gives flat unit gains", "[channel]") {
  TapVector t;
  t.taps = {{1.0, 0.0}};
  const DiagonalChannel ch = taps_to_subcarrier_gains(t, 4);
  REQUIRE(ch.size() == 4);
  for (std::size_t n = 0; n < 4; ++n) {
    REQUIRE(ch.gain_sq(n) == Approx(1.0).margin(1e-15));
  }
}

TEST_CASE("zero taps give zero gains", "[channel]") {
  TapVector t;
  t.taps = {{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
  const DiagonalChannel ch = taps_to_subcarrier_gains(t, 8);
  for (std::size_t n = 0; n < 8; ++n) REQUIRE(ch.gain_sq(n) == 0.0);
}

TEST_CASE("two-tap transform matches a hand 2-point DFT", "[channel]") {
  TapVector t;
  t.taps = {{1.0, 0.0}, {1.0, 0.0}};
  const DiagonalChannel ch = taps_to_subcarrier_gains(t, 2);
  // H_0 = 1 + 1, H_1 = 1 - 1 under the sqrt(N)-rescaled unitary convention.
  REQUIRE(ch.gains[0].real() == Approx(2.0).margin(1e-12));
  REQUIRE(ch.gains[0].imag() == Approx(0.0).margin(1e-12));
  REQUIRE(ch.gain_sq(0) == Approx(4.0).margin(1e-12));
  REQUIRE(ch.gain_sq(1) == Approx(0.0).margin(1e-12));
}

TEST_CASE("transform rejects fewer subcarriers than taps", "[channel]") {
  TapVector t;
  t.taps = {{1.0, 0.0}, {0.5, 0.0}, {0.2, 0.0}};
  REQUIRE_THROWS_AS(taps_to_subcarrier_gains(t, 2), std::invalid_argument);
}

TEST_CASE("Parseval identity holds for random tap vectors", "[channel]") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t l = 1 + static_cast<std::size_t>(rng.uniform01() * 6.0);
    const std::size_t n = l + static_cast<std::size_t>(rng.uniform01() * 28.0);
    const TapVector taps = generate_taps(rng, l, 0.7);
    const DiagonalChannel ch = taps_to_subcarrier_gains(taps, n);
    double tap_power = 0.0, gain_power = 0.0;
    for (const auto& t : taps.taps) tap_power += std::norm(t);
    for (std::size_t k = 0; k < n; ++k) gain_power += ch.gain_sq(k);
    REQUIRE(gain_power ==
            Approx(static_cast<double>(n) * tap_power).epsilon(1e-10));
  }
}

TEST_CASE("channel set: zero cross-link loss removes coupling", "[channel]") {
  SimConfig cfg;
  cfg.delta_cross = 0.0;
  Rng rng(11);
  const ChannelSet set = build_channel_set(cfg, rng);
  for (std::size_t n = 0; n < set.n_subcarriers(); ++n) {
    REQUIRE(set.h12.gain_sq(n) == 0.0);
    REQUIRE(set.h21.gain_sq(n) == 0.0);
    REQUIRE(set.h11.gain_sq(n) > 0.0);
  }
}

TEST_CASE("channel set: cross links scale as sqrt(delta) for a fixed seed", "[channel]") {
  SimConfig a, b;
  a.delta_cross = 0.8;
  b.delta_cross = 0.2;
  Rng ra(5), rb(5);
  const ChannelSet sa = build_channel_set(a, ra);
  const ChannelSet sb = build_channel_set(b, rb);
  const double expected = std::sqrt(0.8 / 0.2);
  for (std::size_t n = 0; n < sa.n_subcarriers(); ++n) {
    REQUIRE(std::abs(sa.h12.gains[n] - expected * sb.h12.gains[n]) <=
            1e-12 * std::abs(sa.h12.gains[n]));
    REQUIRE(std::abs(sa.h21.gains[n] - expected * sb.h21.gains[n]) <=
            1e-12 * std::abs(sa.h21.gains[n]));
    // direct links identical
    REQUIRE(sa.h11.gains[n] == sb.h11.gains[n]);
    REQUIRE(sa.h22.gains[n] == sb.h22.gains[n]);
  }
}

TEST_CASE("channel set: identical seed gives bit-identical channels", "[channel]") {
  SimConfig cfg;
  Rng r1(123), r2(123);
  const ChannelSet s1 = build_channel_set(cfg, r1);
  const ChannelSet s2 = build_channel_set(cfg, r2);
  for (std::size_t n = 0; n < s1.n_subcarriers(); ++n) {
    REQUIRE(s1.h11.gains[n] == s2.h11.gains[n]);
    REQUIRE(s1.h12.gains[n] == s2.h12.gains[n]);
    REQUIRE(s1.h21.gains[n] == s2.h21.gains[n]);
    REQUIRE(s1.h22.gains[n] == s2.h22.gains[n]);
  }
}

TEST_CASE("channel set: paper defaults", "[channel]") {
  SimConfig cfg;
  REQUIRE(cfg.n_subcarriers == 8);
  REQUIRE(cfg.tap_count == 3);
  REQUIRE(cfg.pathloss_power == Approx(1e-3));
  REQUIRE(cfg.delta_cross == Approx(0.8));
  REQUIRE(cfg.budget_uw == Approx(5e4));
  REQUIRE(cfg.pathloss_amp() == Approx(std::sqrt(1e-3)).epsilon(1e-15));
  Rng rng(1);
  const ChannelSet set = build_channel_set(cfg, rng);
  REQUIRE(set.n_subcarriers() == 8);
  REQUIRE(set.delta == Approx(0.8));
}

TEST_CASE("substreams are decorrelated and reproducible", "[channel]") {
  Rng a = Rng::substream(99, 0);
  Rng b = Rng::substream(99, 1);
  Rng a2 = Rng::substream(99, 0);
  const auto za = a.complex_gaussian();
  const auto zb = b.complex_gaussian();
  const auto za2 = a2.complex_gaussian();
  REQUIRE(za == za2);
  REQUIRE(za != zb);
}
