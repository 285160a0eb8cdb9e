// SPDX-License-Identifier: Apache-2.0
//
// Minimal library walkthrough: draw one channel realization, pick the EH
// subcarrier with SLREC, and trace a single boundary point of the
// rate-energy region.

#include <cstdio>

#include "swipt/swipt.hpp"

int main() {
  swipt::SimConfig cfg;  // paper-style defaults: N = 8, P = 50 mW, delta = 0.8
  swipt::Rng rng = swipt::Rng::substream(cfg.master_seed, 0);
  const swipt::ChannelSet ch = swipt::build_channel_set(cfg, rng);

  // The ID transmitter's interference-free waterfilling fixes what the
  // selector is allowed to know.
  const swipt::PowerAllocation p2_wf = swipt::waterfill(swipt::gain_sq(ch.h22), cfg.budget_uw);
  const double e12 = swipt::energy_from_id(ch, p2_wf);

  const double ebar = e12 + 20.0;  // ask for 20 uW more than the ID side provides
  swipt::SelectionContext ctx{ebar, cfg.budget_uw, cfg.beta, e12, std::nullopt};
  const auto n_bar = swipt::select_slrec(ch, ctx);
  if (!n_bar) {
    std::puts("no single subcarrier can satisfy the energy constraint");
    return 0;
  }

  const swipt::Algorithm1Result res =
      swipt::run_algorithm1(ch, *n_bar, ebar, cfg.budget_uw, cfg.algo);
  std::printf("n_bar=%zu  rate=%.6f bits  energy=%.3f uW  iterations=%zu\n", res.n_bar,
              res.point.rate, res.point.energy, res.trace.size());
  for (std::size_t i = 0; i < res.trace.size(); ++i) {
    const swipt::IterationRecord& rec = res.trace[i];
    std::printf("  it %2zu  p1=%10.3f  rate=%.6f  energy=%9.3f  lambda=%.3e\n", i, rec.p1_nbar,
                rec.rate, rec.energy, rec.lambda);
  }
  return 0;
}
