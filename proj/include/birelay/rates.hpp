#pragma once

#include <utility>

#include "birelay/types.hpp"

namespace birelay {

/// Per-frame rate bounds induced by an allocation: direct sums, one-way hop
/// sums, and the five two-way region caps of the parallel-channel DF region.
struct RateCaps {
  std::array<double, 2> direct{0.0, 0.0};    // per user
  std::array<double, 2> ow_hop1{0.0, 0.0};   // user -> relay sums
  std::array<double, 2> ow_hop2{0.0, 0.0};   // relay -> destination sums
  double tw_a1 = 0.0;   // MAC-phase individual cap, A's traffic
  double tw_b1 = 0.0;
  double tw_sum1 = 0.0; // MAC-phase sum cap
  double tw_a2 = 0.0;   // BC-phase cap, A's traffic (relay -> B)
  double tw_b2 = 0.0;   // BC-phase cap, B's traffic (relay -> A)
};

RateCaps compute_rate_caps(const Allocation& alloc,
                           const ProblemInstance& inst);

/// Maximizer of w_a*x + w_b*y over {0 <= x <= cap_a, 0 <= y <= cap_b,
/// x + y <= cap_sum}. Ties resolved toward the max-min point of the optimal
/// face, then toward the larger sum.
std::pair<double, double> best_region_split(double cap_a, double cap_b,
                                            double cap_sum, double w_a,
                                            double w_b);

/// End-to-end per-user per-mode rates of a feasible allocation: direct sums,
/// min-of-hops for one-way, and the split_weights-optimal point of the
/// two-way region.
PerModeRates evaluate_rates(const Allocation& alloc,
                            const ProblemInstance& inst, double split_w_a,
                            double split_w_b);

}  // namespace birelay
