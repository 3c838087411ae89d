#include "birelay/solver.hpp"

#include <algorithm>
#include <cmath>

#include "birelay/power_rules.hpp"

namespace birelay {

namespace {

double mean_outgoing_gain(const ProblemInstance& inst, Node k) {
  const auto& ch = inst.channels;
  const auto pair = [&]() -> std::pair<Link, Link> {
    switch (k) {
      case Node::A: return {Link::AB, Link::AR};
      case Node::B: return {Link::BA, Link::BR};
      default: return {Link::RA, Link::RB};
    }
  }();
  double sum = 0.0;
  for (int n = 0; n < inst.n(); ++n) {
    sum += 0.5 * (ch.gain(pair.first, n) + ch.gain(pair.second, n));
  }
  return sum / inst.n();
}

// Water-filling price that spends the node's budget exactly on a flat
// channel at the node's mean gain.
double budget_spending_price(double level, double budget, double mean_gain,
                             int n, double alpha_min) {
  if (level <= 0.0 || mean_gain <= 0.0) return 1.0;
  const double alpha = level / (kSigma * (budget / n + 1.0 / mean_gain));
  return std::max(alpha, alpha_min);
}

struct RecoveredPrimal {
  Allocation allocation;
  PerModeRates rates;
  double rate_a = 0.0;
  double rate_b = 0.0;
  double objective = 0.0;
  bool qos_feasible = false;
  // Assignment and dual point kept for the final budget-tight refit.
  std::vector<Role> roles;
  DualPoint dual;
};

RecoveredPrimal evaluate_allocation(Allocation alloc,
                                    const ProblemInstance& inst,
                                    const DualPoint& dual) {
  RecoveredPrimal rp;
  rp.allocation = std::move(alloc);
  rp.rates = evaluate_rates(rp.allocation, inst, dual.level(Node::A),
                            dual.level(Node::B));
  rp.rate_a = rp.rates.user_total(Node::A);
  rp.rate_b = rp.rates.user_total(Node::B);
  rp.objective = inst.w_a * rp.rate_a + inst.w_b * rp.rate_b;
  const double tol_a = 1e-9 * (1.0 + inst.r_a);
  const double tol_b = 1e-9 * (1.0 + inst.r_b);
  rp.qos_feasible =
      rp.rate_a >= inst.r_a - tol_a && rp.rate_b >= inst.r_b - tol_b;
  rp.roles.reserve(rp.allocation.decisions.size());
  for (const auto& d : rp.allocation.decisions) rp.roles.push_back(d.role);
  rp.dual = dual;
  return rp;
}

RecoveredPrimal evaluate_recovered(std::vector<SubcarrierDecision> decisions,
                                   const ProblemInstance& inst,
                                   const DualPoint& dual) {
  return evaluate_allocation(recover_primal(std::move(decisions), inst), inst,
                             dual);
}

// Budget-tight power refit for a fixed assignment: keeps the dual point's
// water levels (w_k + mu_k, lam's) but re-prices each node so that it spends
// exactly its budget (or prices out). Monotone spend-vs-price bisection per
// node; A and B alternate because TW1 couples them through the MAC solve.
Allocation refit_powers(const std::vector<Role>& roles,
                        const ProblemInstance& inst, const DualPoint& dual,
                        double alpha_min, double mac_newton_tol) {
  const auto& ch = inst.channels;
  const int n = static_cast<int>(roles.size());
  std::array<double, kNumNodes> price{dual.alpha[0], dual.alpha[1],
                                      dual.alpha[2]};

  std::vector<SubcarrierDecision> decisions(n);
  const auto fill_powers = [&]() {
    for (int i = 0; i < n; ++i) {
      SubcarrierDecision d;
      d.role = roles[i];
      switch (roles[i]) {
        case Role::DtA:
          d.power1 = waterfill_direct(dual.level(Node::A), price[0],
                                      ch.gain(Link::AB, i));
          break;
        case Role::DtB:
          d.power1 = waterfill_direct(dual.level(Node::B), price[1],
                                      ch.gain(Link::BA, i));
          break;
        case Role::Ow1A:
          d.power1 = waterfill_oneway_hop1(dual.lam_b1[0], price[0],
                                           ch.gain(Link::AR, i));
          break;
        case Role::Ow1B:
          d.power1 = waterfill_oneway_hop1(dual.lam_b1[1], price[1],
                                           ch.gain(Link::BR, i));
          break;
        case Role::Ow2A:
          d.power1 = waterfill_oneway_hop2(dual.lam_b2(Node::A), price[2],
                                           ch.gain(Link::RB, i));
          break;
        case Role::Ow2B:
          d.power1 = waterfill_oneway_hop2(dual.lam_b2(Node::B), price[2],
                                           ch.gain(Link::RA, i));
          break;
        case Role::Tw1: {
          const MacPowers mp = solve_mac_powers(
              dual.lam_c1[0], dual.lam_c1[1], dual.lam_ab_c, price[0],
              price[1], ch.gain(Link::AR, i), ch.gain(Link::BR, i),
              mac_newton_tol);
          d.power1 = mp.p_a;
          d.power2 = mp.p_b;
          break;
        }
        case Role::Tw2:
          d.power1 = bc_power(dual.xi(Node::A), dual.xi(Node::B), price[2],
                              ch.gain(Link::RA, i), ch.gain(Link::RB, i));
          break;
        case Role::Idle:
          break;
      }
      decisions[i] = d;
    }
  };

  const std::array<double, kNumNodes> budgets{inst.p_a, inst.p_b, inst.p_r};
  const auto spend_of = [&](Node k) {
    fill_powers();
    return compute_node_power(decisions)[static_cast<int>(k)];
  };

  const auto spend_at = [&](Node k, double p) {
    const int ki = static_cast<int>(k);
    const double saved = price[ki];
    price[ki] = p;
    const double s = spend_of(k);
    price[ki] = saved;
    return s;
  };

  const auto bisect_node = [&](Node k) {
    const int ki = static_cast<int>(k);
    if (spend_at(k, alpha_min) <= budgets[ki]) {
      price[ki] = alpha_min;  // cannot spend the budget even at the floor
      return;
    }
    double lo = alpha_min;
    double hi = std::max(price[ki], 1.0);
    while (spend_at(k, hi) > budgets[ki]) {
      lo = hi;
      hi *= 4.0;
      if (hi > 1e18) break;
    }
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (spend_at(k, mid) > budgets[ki]) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    price[ki] = hi;  // the underspending side keeps the budget feasible
  };

  bisect_node(Node::R);
  for (int round = 0; round < 6; ++round) {
    bisect_node(Node::A);
    bisect_node(Node::B);
  }
  fill_powers();
  return recover_primal(std::move(decisions), inst);
}

// Stationarity audit of every selected inner power (the oracle_check debug
// option): water-filling and BC powers must satisfy their first-order
// conditions, MAC pairs their Eq. (26) KKT pattern.
void audit_inner_powers(const ProblemInstance& inst, const DualPoint& dual,
                        const std::vector<SubcarrierDecision>& decisions) {
  const auto& ch = inst.channels;
  const double tol = 1e-8;
  const auto check_wf = [&](double level, double price, double gain, double p,
                            const char* what) {
    const double grad = level * gain / (kSigma * (1.0 + p * gain)) - price;
    const double resid = p > 0.0 ? std::fabs(grad) : std::max(0.0, grad);
    if (resid > tol * (1.0 + price)) {
      throw std::runtime_error(std::string("oracle_check: ") + what +
                               " stationarity violated");
    }
  };
  for (size_t n = 0; n < decisions.size(); ++n) {
    const auto& d = decisions[n];
    const int i = static_cast<int>(n);
    switch (d.role) {
      case Role::DtA:
        check_wf(dual.level(Node::A), dual.alpha[0], ch.gain(Link::AB, i),
                 d.power1, "DT-A");
        break;
      case Role::DtB:
        check_wf(dual.level(Node::B), dual.alpha[1], ch.gain(Link::BA, i),
                 d.power1, "DT-B");
        break;
      case Role::Ow1A:
        check_wf(dual.lam_b1[0], dual.alpha[0], ch.gain(Link::AR, i), d.power1,
                 "OW1-A");
        break;
      case Role::Ow1B:
        check_wf(dual.lam_b1[1], dual.alpha[1], ch.gain(Link::BR, i), d.power1,
                 "OW1-B");
        break;
      case Role::Ow2A:
        check_wf(dual.lam_b2(Node::A), dual.alpha[2], ch.gain(Link::RB, i),
                 d.power1, "OW2-A");
        break;
      case Role::Ow2B:
        check_wf(dual.lam_b2(Node::B), dual.alpha[2], ch.gain(Link::RA, i),
                 d.power1, "OW2-B");
        break;
      case Role::Tw1:
        if (mac_kkt_residual(dual.lam_c1[0], dual.lam_c1[1], dual.lam_ab_c,
                             dual.alpha[0], dual.alpha[1],
                             ch.gain(Link::AR, i), ch.gain(Link::BR, i),
                             d.power1, d.power2) > tol) {
          throw std::runtime_error("oracle_check: TW1 KKT violated");
        }
        break;
      case Role::Tw2: {
        const double g_ra = ch.gain(Link::RA, i), g_rb = ch.gain(Link::RB, i);
        const double grad = dual.xi(Node::A) * g_rb /
                                (kSigma * (1.0 + d.power1 * g_rb)) +
                            dual.xi(Node::B) * g_ra /
                                (kSigma * (1.0 + d.power1 * g_ra)) -
                            dual.alpha[2];
        const double resid =
            d.power1 > 0.0 ? std::fabs(grad) : std::max(0.0, grad);
        if (resid > tol * (1.0 + dual.alpha[2])) {
          throw std::runtime_error("oracle_check: TW2 stationarity violated");
        }
        break;
      }
      case Role::Idle:
        break;
    }
  }
}

}  // namespace

Eigen::VectorXd restrict_vector(const std::array<double, kNumDuals>& full,
                                const std::vector<int>& active) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(active.size()));
  for (size_t i = 0; i < active.size(); ++i) v[i] = full[active[i]];
  return v;
}

DualInit initial_dual(const ProblemInstance& inst, const SchemeMask& mask,
                      double alpha_min) {
  DualPoint d;
  d.w_a = inst.w_a;
  d.w_b = inst.w_b;
  d.mu = {0.0, 0.0};
  d.lam_b1 = {inst.w_a / 2.0, inst.w_b / 2.0};
  d.lam_c1 = {inst.w_a / 3.0, inst.w_b / 3.0};
  d.lam_ab_c = std::min({(inst.w_a + inst.w_b) / 6.0,
                         inst.w_a - d.lam_c1[0], inst.w_b - d.lam_c1[1]});
  d.lam_ab_c = std::max(0.0, d.lam_ab_c);

  const double level_r = std::max(inst.w_a, inst.w_b);
  d.alpha[0] = budget_spending_price(inst.w_a, inst.p_a,
                                     mean_outgoing_gain(inst, Node::A),
                                     inst.n(), alpha_min);
  d.alpha[1] = budget_spending_price(inst.w_b, inst.p_b,
                                     mean_outgoing_gain(inst, Node::B),
                                     inst.n(), alpha_min);
  d.alpha[2] = budget_spending_price(level_r, inst.p_r,
                                     mean_outgoing_gain(inst, Node::R),
                                     inst.n(), alpha_min);

  // Zero out what the scheme does not search over.
  std::array<bool, kNumDuals> active{};
  for (int idx : mask.active_duals) active[idx] = true;
  auto v = d.to_vector();
  for (int i = 0; i < kNumDuals; ++i) {
    if (!active[i]) v[i] = 0.0;
  }
  DualPoint out = DualPoint::from_vector(v, inst.w_a, inst.w_b);
  if (!active[kAlphaR]) out.alpha[2] = 1.0;  // unused, keep prices positive

  DualInit init;
  init.point = out;
  double scale = std::max({1.0, inst.w_a, inst.w_b});
  for (int idx : mask.active_duals) {
    if (idx >= kAlphaA) scale = std::max(scale, out.alpha[idx - kAlphaA]);
  }
  init.radius = 10.0 * scale;
  return init;
}

Allocation recover_primal(std::vector<SubcarrierDecision> decisions,
                          const ProblemInstance& inst) {
  const auto consumed = compute_node_power(decisions);
  std::array<double, kNumNodes> scale{1.0, 1.0, 1.0};
  const std::array<double, kNumNodes> budgets{inst.p_a, inst.p_b, inst.p_r};
  bool any = false;
  for (int k = 0; k < kNumNodes; ++k) {
    if (consumed[k] > budgets[k]) {
      scale[k] = budgets[k] / consumed[k] * (1.0 - 1e-12);
      any = true;
    }
  }
  if (any) {
    for (auto& d : decisions) {
      switch (d.role) {
        case Role::DtA:
        case Role::Ow1A:
          d.power1 *= scale[0];
          break;
        case Role::DtB:
        case Role::Ow1B:
          d.power1 *= scale[1];
          break;
        case Role::Ow2A:
        case Role::Ow2B:
        case Role::Tw2:
          d.power1 *= scale[2];
          break;
        case Role::Tw1:
          d.power1 *= scale[0];
          d.power2 *= scale[1];
          break;
        case Role::Idle:
          break;
      }
    }
  }
  return make_allocation(std::move(decisions));
}

SolveOutcome solve(const ProblemInstance& inst, const SolverOptions& opts,
                   const SchemeMask& mask, SolveTrace* trace) {
  validate_instance(inst);
  const auto& active = mask.active_duals;
  std::array<int, kNumDuals> pos;
  pos.fill(-1);
  for (size_t i = 0; i < active.size(); ++i) pos[active[i]] = int(i);
  const auto q = static_cast<Eigen::Index>(active.size());

  const DualInit init = initial_dual(inst, mask, opts.alpha_min);
  EllipsoidState state =
      make_ellipsoid(restrict_vector(init.point.to_vector(), active),
                     init.radius);

  // Builds the full dual point from the restricted center; inactive
  // coordinates keep their pinned init values (zero multipliers, unit price
  // for an inactive relay).
  const auto expand = [&](const Eigen::VectorXd& x) {
    auto v = init.point.to_vector();
    for (size_t i = 0; i < active.size(); ++i) v[active[i]] = x[int(i)];
    return DualPoint::from_vector(v, inst.w_a, inst.w_b);
  };

  // First violated dual-feasibility constraint, in a fixed order; returns
  // the restricted gradient of the violated constraint.
  const auto constraint_cut =
      [&](const DualPoint& d) -> std::optional<Eigen::VectorXd> {
    std::array<double, kNumDuals> grad{};
    const auto v = d.to_vector();
    for (int idx : active) {
      const double floor = idx >= kAlphaA ? opts.alpha_min : 0.0;
      if (v[idx] < floor) {
        grad.fill(0.0);
        grad[idx] = -1.0;
        return restrict_vector(grad, active);
      }
    }
    for (int k = 0; k < 2; ++k) {
      if (pos[kLamB1A + k] >= 0 && d.lam_b2(static_cast<Node>(k)) < 0.0) {
        grad.fill(0.0);
        grad[kLamB1A + k] = 1.0;
        grad[kMuA + k] = -1.0;
        return restrict_vector(grad, active);
      }
    }
    for (int k = 0; k < 2; ++k) {
      if (pos[kLamC1A + k] >= 0 && d.xi(static_cast<Node>(k)) < 0.0) {
        grad.fill(0.0);
        grad[kLamC1A + k] = 1.0;
        grad[kLamAbC] = 1.0;
        grad[kMuA + k] = -1.0;
        return restrict_vector(grad, active);
      }
    }
    return std::nullopt;
  };

  double best_dual = std::numeric_limits<double>::infinity();
  std::optional<RecoveredPrimal> best_feasible;
  std::optional<RecoveredPrimal> best_any;
  std::optional<RecoveredPrimal> last_primal;
  bool converged = false;
  int iterations = 0;

  for (int t = 0; t < opts.iter_cap; ++t) {
    iterations = t + 1;
    const DualPoint d = expand(state.center);

    Eigen::VectorXd cut(q);
    CutKind kind;
    IterRecord rec;

    if (auto violation = constraint_cut(d)) {
      cut = *violation;
      kind = CutKind::Constraint;
    } else {
      const InnerResult inner =
          inner_maximize(inst, d, mask, opts.parallel, opts.mac_newton_tol);
      if (opts.oracle_check) audit_inner_powers(inst, d, inner.decisions);
      best_dual = std::min(best_dual, inner.dual_value);

      RecoveredPrimal rp = evaluate_recovered(inner.decisions, inst, d);
      rec.dual_value = inner.dual_value;
      rec.primal_objective = rp.objective;
      rec.primal_feasible = rp.qos_feasible;
      if (opts.track_best_primal) {
        if (!best_any || rp.objective > best_any->objective) best_any = rp;
        if (rp.qos_feasible &&
            (!best_feasible || rp.objective > best_feasible->objective)) {
          best_feasible = rp;
        }
      } else {
        last_primal = std::move(rp);
      }

      cut = restrict_vector(inner.subgradient, active);
      kind = CutKind::Objective;
      const double norm = cut_extent(state, cut);
      rec.stop_norm = norm;
      if (trace) {
        rec.kind = kind;
        if (trace->record_roles) {
          rec.roles.reserve(inner.decisions.size());
          for (const auto& dec : inner.decisions) rec.roles.push_back(dec.role);
        }
        trace->iterations.push_back(rec);
      }
      if (norm < opts.stop_tol) {
        converged = true;
        break;
      }
      if (d.mu[0] > opts.mu_ceiling || d.mu[1] > opts.mu_ceiling) break;
      state = ellipsoid_step(state, cut, kind);
      continue;
    }

    if (trace) {
      rec.kind = kind;
      trace->iterations.push_back(rec);
    }
    // Boundary thrashing can flatten the ellipsoid along a constraint
    // direction before the objective stop triggers; a numerically exhausted
    // extent means the center cannot move materially anymore.
    if (cut_extent(state, cut) <= 1e-12 * (1.0 + cut.norm())) {
      converged = true;
      break;
    }
    state = ellipsoid_step(state, cut, kind);
  }

  if (!opts.track_best_primal && last_primal) {
    best_any = last_primal;
    if (last_primal->qos_feasible) best_feasible = std::move(last_primal);
  }

  // Final refit: re-price the best candidate assignments so every node
  // spends its whole budget (scaling alone leaves underspenders idle and
  // distorts overspenders); keep whichever recovered allocation wins.
  std::vector<RecoveredPrimal> pool;
  const auto add_candidate = [&](const std::optional<RecoveredPrimal>& c) {
    if (!c) return;
    for (const auto& p : pool) {
      if (p.roles == c->roles) return;
    }
    pool.push_back(*c);
  };
  add_candidate(best_feasible);
  add_candidate(best_any);
  const size_t n_raw = pool.size();
  for (size_t i = 0; i < n_raw; ++i) {
    Allocation refit = refit_powers(pool[i].roles, inst, pool[i].dual,
                                    opts.alpha_min, opts.mac_newton_tol);
    pool.push_back(evaluate_allocation(std::move(refit), inst, pool[i].dual));
  }
  best_feasible.reset();
  best_any.reset();
  for (auto& cand : pool) {
    if (!best_any || cand.objective > best_any->objective) best_any = cand;
    if (cand.qos_feasible &&
        (!best_feasible || cand.objective > best_feasible->objective)) {
      best_feasible = cand;
    }
  }

  SolveOutcome out;
  out.iterations = iterations;
  out.converged = converged;
  out.dual_value = best_dual;

  const RecoveredPrimal* chosen =
      best_feasible ? &*best_feasible : (best_any ? &*best_any : nullptr);
  if (chosen) {
    out.allocation = chosen->allocation;
    out.diag_rate_a = chosen->rate_a;
    out.diag_rate_b = chosen->rate_b;
    out.diag_objective = chosen->objective;
  } else {
    out.allocation = make_allocation(
        std::vector<SubcarrierDecision>(inst.n(), SubcarrierDecision{}));
  }
  out.outage = !best_feasible.has_value();
  if (out.outage) {
    // Algorithm 1 outage branch: report zero rates, keep diagnostics.
    out.rate_a = out.rate_b = 0.0;
    out.objective = 0.0;
  } else {
    out.rate_a = chosen->rate_a;
    out.rate_b = chosen->rate_b;
    out.per_mode = chosen->rates;
    out.objective = chosen->objective;
  }
  out.gap_estimate = out.dual_value - out.diag_objective;
  return out;
}

}  // namespace birelay
