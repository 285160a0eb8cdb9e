// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "swipt/metrics.hpp"

using namespace swipt;
using Catch::Approx;
using testutil::channel_set_from_gain_sq;

TEST_CASE("rate: single subcarrier, unit SNR", "[metrics]") {
  const ChannelSet ch = channel_set_from_gain_sq({1.0}, {1.0}, {1.0}, {1.0});
  const PowerAllocation p1{{0.0}, 1.0};
  const PowerAllocation p2{{1.0}, 1.0};
  REQUIRE(achievable_rate(ch, p1, p2) == Approx(1.0).margin(1e-15));
}

TEST_CASE("rate: two subcarriers with mixed interference", "[metrics]") {
  // a = (1, 0), b = (3, 3) -> log2(2.5) + log2(4)
  const ChannelSet ch =
      channel_set_from_gain_sq({1.0, 1.0}, {1.0, 1.0}, {1.0, 0.0}, {1.0, 1.0});
  const PowerAllocation p1{{1.0, 1.0}, 2.0};
  const PowerAllocation p2{{3.0, 3.0}, 6.0};
  REQUIRE(achievable_rate(ch, p1, p2) ==
          Approx(std::log2(2.5) + 2.0).epsilon(1e-12));
}

TEST_CASE("rate: interference on an unused subcarrier costs nothing", "[metrics]") {
  Rng rng(3);
  const ChannelSet ch = testutil::random_channel_set(rng, 6);
  PowerAllocation p1 = PowerAllocation::zeros(6, 60.0);
  PowerAllocation p2 = PowerAllocation::zeros(6, 60.0);
  for (std::size_t n = 0; n < 6; ++n) {
    p1.p[n] = 10.0 * rng.uniform01();
    p2.p[n] = 10.0 * rng.uniform01();
  }
  const std::size_t j = 2;
  p2.p[j] = 0.0;
  double manual = 0.0;
  for (std::size_t n = 0; n < 6; ++n) {
    if (n == j) continue;
    const double a = p1.p[n] * ch.h21.gain_sq(n);
    const double b = p2.p[n] * ch.h22.gain_sq(n);
    manual += std::log2(1.0 + b / (1.0 + a));
  }
  REQUIRE(achievable_rate(ch, p1, p2) == Approx(manual).epsilon(1e-12));
}

TEST_CASE("rate and energy validate their inputs", "[metrics]") {
  const ChannelSet ch = channel_set_from_gain_sq({1, 1}, {1, 1}, {1, 1}, {1, 1});
  const PowerAllocation good{{0.5, 0.5}, 1.0};
  const PowerAllocation wrong_size{{0.5}, 1.0};
  const PowerAllocation negative{{-0.5, 0.5}, 1.0};
  const PowerAllocation over{{2.0, 2.0}, 1.0};
  REQUIRE_THROWS_AS(achievable_rate(ch, wrong_size, good), std::invalid_argument);
  REQUIRE_THROWS_AS(achievable_rate(ch, negative, good), std::invalid_argument);
  REQUIRE_THROWS_AS(harvested_energy(ch, good, over), std::invalid_argument);
  REQUIRE_THROWS_AS(energy_from_id(ch, wrong_size), std::invalid_argument);
}

TEST_CASE("energy: zero allocations harvest nothing", "[metrics]") {
  const ChannelSet ch = channel_set_from_gain_sq({3.0}, {0.5}, {1.0}, {1.0});
  const PowerAllocation z = PowerAllocation::zeros(1, 1.0);
  REQUIRE(harvested_energy(ch, z, z) == 0.0);
}

TEST_CASE("energy: direct sum and linearity", "[metrics]") {
  const ChannelSet ch = channel_set_from_gain_sq({3.0}, {0.5}, {1.0}, {1.0});
  const PowerAllocation p1{{2.0}, 4.0};
  const PowerAllocation p2{{1.0}, 4.0};
  REQUIRE(harvested_energy(ch, p1, p2) == Approx(6.5).margin(1e-12));

  const PowerAllocation p1x{{4.0}, 8.0};
  const PowerAllocation p2x{{2.0}, 8.0};
  REQUIRE(harvested_energy(ch, p1x, p2x) == Approx(13.0).margin(1e-12));
}

TEST_CASE("energy from the ID transmitter matches the joint metric", "[metrics]") {
  Rng rng(9);
  const ChannelSet ch = testutil::random_channel_set(rng, 5);
  PowerAllocation p2 = PowerAllocation::zeros(5, 50.0);
  for (auto& x : p2.p) x = 8.0 * rng.uniform01();
  const PowerAllocation zeros = PowerAllocation::zeros(5, 50.0);
  REQUIRE(energy_from_id(ch, p2) == Approx(harvested_energy(ch, zeros, p2)).epsilon(1e-14));

  // flat |h12|^2 factorizes
  const ChannelSet flat = channel_set_from_gain_sq({1, 1, 1}, {0.7, 0.7, 0.7}, {1, 1, 1}, {1, 1, 1});
  const PowerAllocation p{{1.0, 2.0, 3.0}, 6.0};
  REQUIRE(energy_from_id(flat, p) == Approx(0.7 * 6.0).epsilon(1e-14));
}

TEST_CASE("rate is monotone in each transmitter's power", "[metrics]") {
  Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const ChannelSet ch = testutil::random_channel_set(rng, 4);
    PowerAllocation p1 = PowerAllocation::zeros(4, 100.0);
    PowerAllocation p2 = PowerAllocation::zeros(4, 100.0);
    for (std::size_t n = 0; n < 4; ++n) {
      p1.p[n] = 5.0 * rng.uniform01();
      p2.p[n] = 5.0 * rng.uniform01();
    }
    const double base = achievable_rate(ch, p1, p2);
    const std::size_t j = static_cast<std::size_t>(rng.uniform01() * 4.0) % 4;

    PowerAllocation more_interference = p1;
    more_interference.p[j] += 1.0;
    REQUIRE(achievable_rate(ch, more_interference, p2) <= base + 1e-12);

    PowerAllocation more_signal = p2;
    more_signal.p[j] += 1.0;
    REQUIRE(achievable_rate(ch, p1, more_signal) >= base - 1e-12);
  }
}

TEST_CASE("sum-of-logs rate equals the determinant form", "[metrics]") {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform01() * 12.0);
    const ChannelSet ch = testutil::random_channel_set(rng, n);
    PowerAllocation p1 = PowerAllocation::zeros(n, 10.0 * static_cast<double>(n));
    PowerAllocation p2 = PowerAllocation::zeros(n, 10.0 * static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
      p1.p[k] = 10.0 * rng.uniform01();
      p2.p[k] = 10.0 * rng.uniform01();
    }
    const double sum_form = achievable_rate(ch, p1, p2);
    const double det_form = testutil::det_form_rate(ch, p1, p2);
    REQUIRE(sum_form == Approx(det_form).epsilon(1e-10));
  }
}
