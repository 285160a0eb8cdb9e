// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "swipt/selection.hpp"

using namespace swipt;
using testutil::channel_set_from_gain_sq;

namespace {

ChannelSet with_h11_h21(const std::vector<double>& g11, const std::vector<double>& g21) {
  const std::vector<double> ones(g11.size(), 1.0);
  return channel_set_from_gain_sq(g11, ones, g21, ones);
}

}  // namespace

TEST_CASE("strategy names round-trip", "[selection]") {
  for (Strategy s : kAllStrategies) {
    const auto parsed = parse_strategy(strategy_name(s));
    REQUIRE(parsed.has_value());
    REQUIRE(*parsed == s);
  }
  REQUIRE_FALSE(parse_strategy("nonsense").has_value());
}

TEST_CASE("maxcg picks the strongest own link", "[selection]") {
  REQUIRE(select_maxcg(with_h11_h21({1.0, 4.0, 2.0}, {1, 1, 1})) == 1);
  REQUIRE(select_maxcg(with_h11_h21({2.0, 2.0, 2.0}, {1, 1, 1})) == 0);
  REQUIRE(select_maxcg(with_h11_h21({5.0}, {1})) == 0);
}

TEST_CASE("mincg picks the weakest leakage link", "[selection]") {
  REQUIRE(select_mincg(with_h11_h21({1, 1, 1}, {0.5, 0.1, 0.9})) == 1);
  REQUIRE(select_mincg(with_h11_h21({1, 1, 1}, {0.0, 0.0, 0.0})) == 0);
  REQUIRE(select_mincg(with_h11_h21({1}, {0.3})) == 0);
}

TEST_CASE("sler with no energy deficit reduces to the leakage ratio", "[selection]") {
  const ChannelSet ch = with_h11_h21({4.0, 1.0}, {1.0, 0.1});
  SelectionContext ctx;
  ctx.budget = 1.0;
  ctx.beta = 2.5;
  ctx.ebar = 0.0;  // max(ebar/P - g, 0) vanishes
  REQUIRE(select_sler(ch, ctx) == 1);  // scores (4, 10)
}

TEST_CASE("sler derived example: energy deficit flips the choice", "[selection]") {
  const ChannelSet ch = with_h11_h21({4.0, 1.0}, {1.0, 0.1});
  SelectionContext ctx;
  ctx.budget = 1.0;
  ctx.beta = 1.0;
  ctx.ebar = 2.0;  // deficits (0, 1) -> scores (4, 1/1.1)
  REQUIRE(select_sler(ch, ctx) == 0);
}

TEST_CASE("sler treats a vanishing denominator as an immediate winner", "[selection]") {
  const ChannelSet ch = with_h11_h21({1.0, 3.0}, {1.0, 0.0});
  SelectionContext ctx;
  ctx.budget = 1.0;
  ctx.ebar = 0.0;
  REQUIRE(select_sler(ch, ctx) == 1);
}

TEST_CASE("sler enumeration oracle agrees on random instances", "[selection]") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform01() * 8.0);
    std::vector<double> g11(n), g21(n);
    for (std::size_t k = 0; k < n; ++k) {
      g11[k] = 4.0 * rng.uniform01();
      g21[k] = 2.0 * rng.uniform01();
    }
    SelectionContext ctx;
    ctx.budget = 1.0 + 9.0 * rng.uniform01();
    ctx.beta = 2.0 * rng.uniform01();
    ctx.ebar = 5.0 * rng.uniform01();
    const ChannelSet ch = with_h11_h21(g11, g21);

    std::size_t best = 0;
    double best_score = -1.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double deficit = std::max(ctx.ebar / ctx.budget - g11[k], 0.0);
      const double den = g21[k] + ctx.beta * deficit;
      const double score = den == 0.0 ? std::numeric_limits<double>::infinity() : g11[k] / den;
      if (score > best_score) {
        best_score = score;
        best = k;
      }
    }
    REQUIRE(select_sler(ch, ctx) == best);
  }
}

TEST_CASE("slrec filters energy-infeasible subcarriers", "[selection]") {
  const ChannelSet ch = channel_set_from_gain_sq({1.0, 3.0, 2.0}, {1, 1, 1},
                                                 {1.0, 1.0, 1.0}, {1, 1, 1});
  SelectionContext ctx;
  ctx.budget = 10.0;
  ctx.ebar = 25.0;
  ctx.e12 = 5.0;  // candidates: 10*g11 >= 20 -> indices {1, 2}
  const auto pick = select_slrec(ch, ctx);
  REQUIRE(pick.has_value());
  REQUIRE(*pick == 1);  // ratios (3, 2) among candidates
}

TEST_CASE("slrec with a vacuous constraint is the pure ratio argmax", "[selection]") {
  const ChannelSet ch = channel_set_from_gain_sq({1.0, 2.0, 4.0}, {1, 1, 1},
                                                 {2.0, 0.5, 8.0}, {1, 1, 1});
  SelectionContext ctx;
  ctx.budget = 10.0;
  ctx.ebar = 1.0;
  ctx.e12 = 2.0;  // ebar <= e12: every subcarrier qualifies
  const auto pick = select_slrec(ch, ctx);
  REQUIRE(pick.has_value());
  REQUIRE(*pick == 1);  // ratios (0.5, 4, 0.5)
}

TEST_CASE("slrec reports infeasibility on an empty candidate set", "[selection]") {
  const ChannelSet ch = channel_set_from_gain_sq({1e-3, 2e-3}, {1, 1}, {1, 1}, {1, 1});
  SelectionContext ctx;
  ctx.budget = 10.0;
  ctx.ebar = 1e6;
  ctx.e12 = 0.0;
  REQUIRE_FALSE(select_slrec(ch, ctx).has_value());
}

TEST_CASE("slrec choice always covers the energy constraint", "[selection]") {
  Rng rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform01() * 8.0);
    std::vector<double> g11(n), g21(n);
    for (std::size_t k = 0; k < n; ++k) {
      g11[k] = 4.0 * rng.uniform01();
      g21[k] = 2.0 * rng.uniform01();
    }
    SelectionContext ctx;
    ctx.budget = 1.0 + 9.0 * rng.uniform01();
    ctx.ebar = 20.0 * rng.uniform01();
    ctx.e12 = 5.0 * rng.uniform01();
    const auto pick = select_slrec(with_h11_h21(g11, g21), ctx);
    if (pick.has_value()) {
      REQUIRE(ctx.budget * g11[*pick] + ctx.e12 >= ctx.ebar);
    }
  }
}

TEST_CASE("slrec-sharing branches", "[selection]") {
  const ChannelSet ch = channel_set_from_gain_sq({1.0, 3.0, 2.0}, {1, 1, 1},
                                                 {1.0, 0.1, 1.0}, {1, 1, 1});
  SelectionContext ctx;
  ctx.budget = 10.0;
  ctx.ebar = 5.0;
  ctx.e12 = 0.0;  // all subcarriers are candidates

  SECTION("empty Z falls back to plain slrec") {
    ctx.unutilized = std::vector<std::size_t>{};
    REQUIRE(*select_slrec_sharing(ch, ctx) == *select_slrec(ch, ctx));
  }
  SECTION("full Z turns into maxcg over candidates") {
    ctx.unutilized = std::vector<std::size_t>{0, 1, 2};
    REQUIRE(*select_slrec_sharing(ch, ctx) == 1);  // largest |h11|^2
  }
  SECTION("a single unused feasible subcarrier wins regardless of leakage") {
    ctx.unutilized = std::vector<std::size_t>{2};
    REQUIRE(*select_slrec_sharing(ch, ctx) == 2);
  }
  SECTION("missing Z is a contract violation") {
    ctx.unutilized.reset();
    REQUIRE_THROWS_AS(select_slrec_sharing(ch, ctx), std::invalid_argument);
  }
}

TEST_CASE("slrec-sharing stays inside the candidate set", "[selection]") {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 6.0);
    std::vector<double> g11(n), g21(n);
    std::vector<std::size_t> z;
    for (std::size_t k = 0; k < n; ++k) {
      g11[k] = 4.0 * rng.uniform01();
      g21[k] = 2.0 * rng.uniform01();
      if (rng.uniform01() < 0.4) z.push_back(k);
    }
    SelectionContext ctx;
    ctx.budget = 1.0 + 9.0 * rng.uniform01();
    ctx.ebar = 15.0 * rng.uniform01();
    ctx.e12 = 3.0 * rng.uniform01();
    ctx.unutilized = z;
    const ChannelSet ch = with_h11_h21(g11, g21);
    const auto pick = select_slrec_sharing(ch, ctx);
    if (pick.has_value()) {
      REQUIRE(ctx.budget * g11[*pick] >= ctx.ebar - ctx.e12);
    } else {
      REQUIRE_FALSE(select_slrec(ch, ctx).has_value());
    }
  }
}

TEST_CASE("two-EH selection maximizes the summed gain", "[selection]") {
  REQUIRE(select_two_eh(testutil::channel_from_gain_sq({1.0, 0.0}),
                        testutil::channel_from_gain_sq({0.0, 3.0})) == 1);
  const auto same = testutil::channel_from_gain_sq({0.2, 0.9, 0.4});
  REQUIRE(select_two_eh(same, same) == 1);
  REQUIRE(select_two_eh(testutil::channel_from_gain_sq({1.0}),
                        testutil::channel_from_gain_sq({1.0})) == 0);
}

TEST_CASE("selectors are invariant under a common positive rescaling", "[selection]") {
  Rng rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 6.0);
    std::vector<double> g11(n), g21(n), g11s(n), g21s(n);
    const double c = 0.01 + 100.0 * rng.uniform01();
    for (std::size_t k = 0; k < n; ++k) {
      g11[k] = 4.0 * rng.uniform01();
      g21[k] = 2.0 * rng.uniform01();
      g11s[k] = c * g11[k];
      g21s[k] = c * g21[k];
    }
    const ChannelSet ch = with_h11_h21(g11, g21);
    const ChannelSet chs = with_h11_h21(g11s, g21s);

    REQUIRE(select_maxcg(ch) == select_maxcg(chs));
    REQUIRE(select_mincg(ch) == select_mincg(chs));

    SelectionContext ctx;
    ctx.budget = 5.0;
    ctx.beta = 1.0;
    ctx.ebar = 10.0 * rng.uniform01();
    ctx.e12 = 2.0 * rng.uniform01();
    SelectionContext scaled = ctx;
    scaled.ebar = c * ctx.ebar;  // channel powers and energies share the factor
    scaled.e12 = c * ctx.e12;
    REQUIRE(select_sler(ch, ctx) == select_sler(chs, scaled));
    REQUIRE(select_slrec(ch, ctx) == select_slrec(chs, scaled));
  }
}
