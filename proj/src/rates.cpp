#include "birelay/rates.hpp"

#include <algorithm>
#include <cmath>

#include "birelay/power_rules.hpp"

namespace birelay {

RateCaps compute_rate_caps(const Allocation& alloc,
                           const ProblemInstance& inst) {
  RateCaps caps;
  const auto& ch = inst.channels;
  for (size_t n = 0; n < alloc.decisions.size(); ++n) {
    const auto& d = alloc.decisions[n];
    const int i = static_cast<int>(n);
    switch (d.role) {
      case Role::DtA:
        caps.direct[0] += cap_rate(d.power1 * ch.gain(Link::AB, i));
        break;
      case Role::DtB:
        caps.direct[1] += cap_rate(d.power1 * ch.gain(Link::BA, i));
        break;
      case Role::Ow1A:
        caps.ow_hop1[0] += cap_rate(d.power1 * ch.gain(Link::AR, i));
        break;
      case Role::Ow1B:
        caps.ow_hop1[1] += cap_rate(d.power1 * ch.gain(Link::BR, i));
        break;
      case Role::Ow2A:  // relay forwards A's traffic to B
        caps.ow_hop2[0] += cap_rate(d.power1 * ch.gain(Link::RB, i));
        break;
      case Role::Ow2B:
        caps.ow_hop2[1] += cap_rate(d.power1 * ch.gain(Link::RA, i));
        break;
      case Role::Tw1: {
        const double xa = d.power1 * ch.gain(Link::AR, i);
        const double xb = d.power2 * ch.gain(Link::BR, i);
        caps.tw_a1 += cap_rate(xa);
        caps.tw_b1 += cap_rate(xb);
        caps.tw_sum1 += cap_rate(xa + xb);
        break;
      }
      case Role::Tw2:
        caps.tw_a2 += cap_rate(d.power1 * ch.gain(Link::RB, i));
        caps.tw_b2 += cap_rate(d.power1 * ch.gain(Link::RA, i));
        break;
      case Role::Idle:
        break;
    }
  }
  return caps;
}

std::pair<double, double> best_region_split(double cap_a, double cap_b,
                                            double cap_sum, double w_a,
                                            double w_b) {
  const double cx = std::max(0.0, std::min(cap_a, cap_sum));
  const double cy = std::max(0.0, std::min(cap_b, cap_sum));
  const double cs = std::max(0.0, cap_sum);

  // Candidate optima: the polytope vertices plus the balanced point of the
  // sum face (the max-min representative when the face ties).
  std::pair<double, double> cands[6];
  int m = 0;
  cands[m++] = {0.0, 0.0};
  cands[m++] = {cx, 0.0};
  cands[m++] = {0.0, cy};
  cands[m++] = {cx, std::max(0.0, std::min(cy, cs - cx))};
  cands[m++] = {std::max(0.0, std::min(cx, cs - cy)), cy};
  const double bal = std::min({cs / 2.0, cx, cy});
  cands[m++] = {bal, bal};

  double best_val = -1.0;
  std::pair<double, double> best{0.0, 0.0};
  for (int i = 0; i < m; ++i) {
    const auto [x, y] = cands[i];
    const double val = w_a * x + w_b * y;
    const double tol = 1e-12 * (1.0 + std::fabs(best_val));
    if (val > best_val + tol) {
      best_val = val;
      best = {x, y};
    } else if (val > best_val - tol) {
      // Tie on the weighted value: prefer the larger min, then larger sum.
      const double mn_new = std::min(x, y), mn_old = std::min(best.first, best.second);
      const double sm_new = x + y, sm_old = best.first + best.second;
      if (mn_new > mn_old + tol ||
          (mn_new > mn_old - tol && sm_new > sm_old + tol)) {
        best = {x, y};
      }
    }
  }
  return best;
}

PerModeRates evaluate_rates(const Allocation& alloc,
                            const ProblemInstance& inst, double split_w_a,
                            double split_w_b) {
  const RateCaps caps = compute_rate_caps(alloc, inst);
  PerModeRates out;
  out.rate[0][static_cast<int>(Mode::Direct)] = caps.direct[0];
  out.rate[1][static_cast<int>(Mode::Direct)] = caps.direct[1];
  out.rate[0][static_cast<int>(Mode::OneWay)] =
      std::min(caps.ow_hop1[0], caps.ow_hop2[0]);
  out.rate[1][static_cast<int>(Mode::OneWay)] =
      std::min(caps.ow_hop1[1], caps.ow_hop2[1]);
  const auto [tw_a, tw_b] =
      best_region_split(std::min(caps.tw_a1, caps.tw_a2),
                        std::min(caps.tw_b1, caps.tw_b2), caps.tw_sum1,
                        split_w_a, split_w_b);
  out.rate[0][static_cast<int>(Mode::TwoWay)] = tw_a;
  out.rate[1][static_cast<int>(Mode::TwoWay)] = tw_b;
  return out;
}

}  // namespace birelay
