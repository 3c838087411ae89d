#include "birelay/profits.hpp"

#include <cmath>
#include <limits>

#include "birelay/power_rules.hpp"

namespace birelay {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Water-filling profit: level * C(p*g) - price * p at the optimal p.
double wf_profit(double level, double price, double gain, double p) {
  return level * cap_rate(p * gain) - price * p;
}

// Tiny negative profits are rounding noise around the p = 0 optimum.
double clamp_profit(double h) { return (h < 0.0 && h > -1e-9) ? 0.0 : h; }

}  // namespace

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Proposed: return "proposed";
    case Scheme::BM1: return "bm1";
    case Scheme::BM2: return "bm2";
  }
  return "?";
}

SchemeMask scheme_mask(Scheme s) {
  SchemeMask m;
  switch (s) {
    case Scheme::Proposed:
      m.role_allowed = {true, true, true, true, true, true, true, true};
      m.active_duals = {kLamB1A, kLamB1B, kLamC1A, kLamC1B, kLamAbC,
                        kMuA,    kMuB,    kAlphaA, kAlphaB, kAlphaR};
      m.relay_active = true;
      break;
    case Scheme::BM1:
      m.role_allowed = {true, true, false, false, false, false, false, false};
      m.active_duals = {kMuA, kMuB, kAlphaA, kAlphaB};
      m.relay_active = false;
      break;
    case Scheme::BM2:
      m.role_allowed = {true, true, true, true, true, true, false, false};
      m.active_duals = {kLamB1A, kLamB1B, kMuA, kMuB, kAlphaA, kAlphaB, kAlphaR};
      m.relay_active = true;
      break;
  }
  return m;
}

SubcarrierProfits compute_profits(int n, const DualPoint& dual,
                                  const ProblemInstance& inst,
                                  const SchemeMask& mask,
                                  double mac_newton_tol) {
  const auto& ch = inst.channels;
  const double g_ab = ch.gain(Link::AB, n);
  const double g_ba = ch.gain(Link::BA, n);
  const double g_ar = ch.gain(Link::AR, n);
  const double g_br = ch.gain(Link::BR, n);
  const double g_ra = ch.gain(Link::RA, n);
  const double g_rb = ch.gain(Link::RB, n);

  SubcarrierProfits out;
  out.profits.value.fill(kNegInf);

  const auto set = [&](Role r, double profit, double p1) {
    const int i = static_cast<int>(r);
    out.profits.value[i] = clamp_profit(profit);
    out.power1[i] = p1;
  };

  if (mask.allows(Role::DtA)) {
    const double lvl = dual.level(Node::A);
    const double p = waterfill_direct(lvl, dual.alpha[0], g_ab);
    set(Role::DtA, wf_profit(lvl, dual.alpha[0], g_ab, p), p);
  }
  if (mask.allows(Role::DtB)) {
    const double lvl = dual.level(Node::B);
    const double p = waterfill_direct(lvl, dual.alpha[1], g_ba);
    set(Role::DtB, wf_profit(lvl, dual.alpha[1], g_ba, p), p);
  }
  if (mask.allows(Role::Ow1A)) {
    const double lvl = dual.lam_b1[0];
    const double p = waterfill_oneway_hop1(lvl, dual.alpha[0], g_ar);
    set(Role::Ow1A, wf_profit(lvl, dual.alpha[0], g_ar, p), p);
  }
  if (mask.allows(Role::Ow1B)) {
    const double lvl = dual.lam_b1[1];
    const double p = waterfill_oneway_hop1(lvl, dual.alpha[1], g_br);
    set(Role::Ow1B, wf_profit(lvl, dual.alpha[1], g_br, p), p);
  }
  if (mask.allows(Role::Ow2A)) {
    // A's traffic on its second hop: the relay transmits to B.
    const double lvl = dual.lam_b2(Node::A);
    const double p = waterfill_oneway_hop2(lvl, dual.alpha[2], g_rb);
    set(Role::Ow2A, wf_profit(lvl, dual.alpha[2], g_rb, p), p);
  }
  if (mask.allows(Role::Ow2B)) {
    const double lvl = dual.lam_b2(Node::B);
    const double p = waterfill_oneway_hop2(lvl, dual.alpha[2], g_ra);
    set(Role::Ow2B, wf_profit(lvl, dual.alpha[2], g_ra, p), p);
  }
  if (mask.allows(Role::Tw1)) {
    const MacPowers mp =
        solve_mac_powers(dual.lam_c1[0], dual.lam_c1[1], dual.lam_ab_c,
                         dual.alpha[0], dual.alpha[1], g_ar, g_br,
                         mac_newton_tol);
    const double h =
        mac_profit(dual.lam_c1[0], dual.lam_c1[1], dual.lam_ab_c,
                   dual.alpha[0], dual.alpha[1], g_ar, g_br, mp.p_a, mp.p_b);
    set(Role::Tw1, h, mp.p_a);
    out.tw1_power_b = mp.p_b;
  }
  if (mask.allows(Role::Tw2)) {
    const double xi_a = dual.xi(Node::A);
    const double xi_b = dual.xi(Node::B);
    const double p = bc_power(xi_a, xi_b, dual.alpha[2], g_ra, g_rb);
    set(Role::Tw2, bc_profit(xi_a, xi_b, dual.alpha[2], g_ra, g_rb, p), p);
  }
  return out;
}

Role assign_subcarrier(const ProfitVector& profits) {
  int best = -1;
  double best_value = 0.0;
  for (int i = 0; i < kNumActiveRoles; ++i) {
    if (profits.value[i] > best_value) {
      best_value = profits.value[i];
      best = i;
    }
  }
  return best < 0 ? Role::Idle : static_cast<Role>(best);
}

InnerResult inner_maximize(const ProblemInstance& inst, const DualPoint& dual,
                           const SchemeMask& mask, bool parallel,
                           double mac_newton_tol) {
  const int n = inst.n();
  std::vector<SubcarrierDecision> decisions(n);
  std::vector<double> selected_profit(n, 0.0);

#pragma omp parallel for schedule(static) if (parallel)
  for (int i = 0; i < n; ++i) {
    const SubcarrierProfits sp =
        compute_profits(i, dual, inst, mask, mac_newton_tol);
    const Role role = assign_subcarrier(sp.profits);
    SubcarrierDecision d;
    d.role = role;
    if (role != Role::Idle) {
      const int r = static_cast<int>(role);
      d.power1 = sp.power1[r];
      d.power2 = role == Role::Tw1 ? sp.tw1_power_b : 0.0;
      selected_profit[i] = sp.profits.value[r];
    }
    decisions[i] = d;
  }

  // Serial accumulation in subcarrier order keeps results independent of the
  // thread count.
  InnerResult res;
  res.subgradient.fill(0.0);
  const auto& ch = inst.channels;
  double profit_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    profit_sum += selected_profit[i];
    const auto& d = decisions[i];
    switch (d.role) {
      case Role::DtA:
        res.subgradient[kMuA] += cap_rate(d.power1 * ch.gain(Link::AB, i));
        res.consumed[0] += d.power1;
        break;
      case Role::DtB:
        res.subgradient[kMuB] += cap_rate(d.power1 * ch.gain(Link::BA, i));
        res.consumed[1] += d.power1;
        break;
      case Role::Ow1A:
        res.subgradient[kLamB1A] += cap_rate(d.power1 * ch.gain(Link::AR, i));
        res.consumed[0] += d.power1;
        break;
      case Role::Ow1B:
        res.subgradient[kLamB1B] += cap_rate(d.power1 * ch.gain(Link::BR, i));
        res.consumed[1] += d.power1;
        break;
      case Role::Ow2A: {
        const double r = cap_rate(d.power1 * ch.gain(Link::RB, i));
        res.subgradient[kLamB1A] -= r;
        res.subgradient[kMuA] += r;
        res.consumed[2] += d.power1;
        break;
      }
      case Role::Ow2B: {
        const double r = cap_rate(d.power1 * ch.gain(Link::RA, i));
        res.subgradient[kLamB1B] -= r;
        res.subgradient[kMuB] += r;
        res.consumed[2] += d.power1;
        break;
      }
      case Role::Tw1: {
        const double xa = d.power1 * ch.gain(Link::AR, i);
        const double xb = d.power2 * ch.gain(Link::BR, i);
        res.subgradient[kLamC1A] += cap_rate(xa);
        res.subgradient[kLamC1B] += cap_rate(xb);
        res.subgradient[kLamAbC] += cap_rate(xa + xb);
        res.consumed[0] += d.power1;
        res.consumed[1] += d.power2;
        break;
      }
      case Role::Tw2: {
        const double ra = cap_rate(d.power1 * ch.gain(Link::RB, i));
        const double rb = cap_rate(d.power1 * ch.gain(Link::RA, i));
        res.subgradient[kLamC1A] -= ra;
        res.subgradient[kLamC1B] -= rb;
        res.subgradient[kLamAbC] -= ra + rb;
        res.subgradient[kMuA] += ra;
        res.subgradient[kMuB] += rb;
        res.consumed[2] += d.power1;
        break;
      }
      case Role::Idle:
        break;
    }
  }

  res.subgradient[kMuA] -= inst.r_a;
  res.subgradient[kMuB] -= inst.r_b;
  res.subgradient[kAlphaA] = inst.p_a - res.consumed[0];
  res.subgradient[kAlphaB] = inst.p_b - res.consumed[1];
  res.subgradient[kAlphaR] = inst.p_r - res.consumed[2];

  double constant = dual.alpha[0] * inst.p_a + dual.alpha[1] * inst.p_b -
                    dual.mu[0] * inst.r_a - dual.mu[1] * inst.r_b;
  if (mask.relay_active) constant += dual.alpha[2] * inst.p_r;
  res.dual_value = profit_sum + constant;
  res.decisions = std::move(decisions);
  return res;
}

}  // namespace birelay
