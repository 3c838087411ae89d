#include "birelay/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "birelay/power_rules.hpp"
#include "birelay/rates.hpp"

namespace birelay {

namespace {

// Lifted convex program for a fixed assignment: variables are the per-role
// powers plus four rate variables (one-way and two-way end-to-end rates per
// user); the nine rate-coupling constraints are handled by an augmented
// Lagrangian, the node budgets by projection.
struct PowerVar {
  int subcarrier;
  Role role;
  int slot;  // 0 = power1, 1 = power2 (Tw1 only)
  Node owner;
};

struct Lifted {
  std::vector<PowerVar> vars;
  std::array<std::vector<int>, kNumNodes> owned;  // var indices per node
  int m = 0;           // number of power vars
  int rb_a, rb_b, rc_a, rc_b;  // rate-var offsets in z
  int dim = 0;
};

Lifted build_layout(const std::vector<Role>& assignment) {
  Lifted l;
  for (size_t n = 0; n < assignment.size(); ++n) {
    const int i = static_cast<int>(n);
    switch (assignment[n]) {
      case Role::DtA:
        l.vars.push_back({i, Role::DtA, 0, Node::A});
        break;
      case Role::DtB:
        l.vars.push_back({i, Role::DtB, 0, Node::B});
        break;
      case Role::Ow1A:
        l.vars.push_back({i, Role::Ow1A, 0, Node::A});
        break;
      case Role::Ow1B:
        l.vars.push_back({i, Role::Ow1B, 0, Node::B});
        break;
      case Role::Ow2A:
        l.vars.push_back({i, Role::Ow2A, 0, Node::R});
        break;
      case Role::Ow2B:
        l.vars.push_back({i, Role::Ow2B, 0, Node::R});
        break;
      case Role::Tw1:
        l.vars.push_back({i, Role::Tw1, 0, Node::A});
        l.vars.push_back({i, Role::Tw1, 1, Node::B});
        break;
      case Role::Tw2:
        l.vars.push_back({i, Role::Tw2, 0, Node::R});
        break;
      case Role::Idle:
        break;
    }
  }
  l.m = static_cast<int>(l.vars.size());
  for (int j = 0; j < l.m; ++j) {
    l.owned[static_cast<int>(l.vars[j].owner)].push_back(j);
  }
  l.rb_a = l.m;
  l.rb_b = l.m + 1;
  l.rc_a = l.m + 2;
  l.rc_b = l.m + 3;
  l.dim = l.m + 4;
  return l;
}

// Euclidean projection of x onto {x >= 0, sum(x) <= budget} restricted to
// the given indices (in place).
void project_budget(std::vector<double>& z, const std::vector<int>& idx,
                    double budget) {
  double clamped_sum = 0.0;
  for (int j : idx) clamped_sum += std::max(0.0, z[j]);
  if (clamped_sum <= budget) {
    for (int j : idx) z[j] = std::max(0.0, z[j]);
    return;
  }
  // Project onto the simplex {x >= 0, sum = budget}.
  std::vector<double> u;
  u.reserve(idx.size());
  for (int j : idx) u.push_back(z[j]);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, tau = 0.0;
  int k = 0;
  for (size_t i = 0; i < u.size(); ++i) {
    cum += u[i];
    const double t = (cum - budget) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) {
      tau = t;
      k = static_cast<int>(i + 1);
    }
  }
  (void)k;
  for (int j : idx) z[j] = std::max(0.0, z[j] - tau);
}

struct CapsEval {
  // S1A, S2A, S1B, S2B, SA1, SB1, SAB, SA2, SB2 in constraint order paired
  // with (rb_a, rb_a, rb_b, rb_b, rc_a, rc_b, rc_a+rc_b, rc_a, rc_b).
  std::array<double, 9> cap{};
  std::array<double, 2> direct{};
};

class AssignmentProblem {
 public:
  AssignmentProblem(const std::vector<Role>& assignment,
                    const ProblemInstance& inst, double wt_a, double wt_b)
      : inst_(inst), layout_(build_layout(assignment)), wt_a_(wt_a), wt_b_(wt_b) {
    gain1_.resize(layout_.m);
    gain2_.resize(layout_.m, 0.0);
    const auto& ch = inst.channels;
    for (int j = 0; j < layout_.m; ++j) {
      const auto& v = layout_.vars[j];
      const int n = v.subcarrier;
      switch (v.role) {
        case Role::DtA: gain1_[j] = ch.gain(Link::AB, n); break;
        case Role::DtB: gain1_[j] = ch.gain(Link::BA, n); break;
        case Role::Ow1A: gain1_[j] = ch.gain(Link::AR, n); break;
        case Role::Ow1B: gain1_[j] = ch.gain(Link::BR, n); break;
        case Role::Ow2A: gain1_[j] = ch.gain(Link::RB, n); break;
        case Role::Ow2B: gain1_[j] = ch.gain(Link::RA, n); break;
        case Role::Tw1:
          gain1_[j] = v.slot == 0 ? ch.gain(Link::AR, n) : ch.gain(Link::BR, n);
          break;
        case Role::Tw2:
          gain1_[j] = ch.gain(Link::RB, n);  // towards B (A's traffic)
          gain2_[j] = ch.gain(Link::RA, n);  // towards A (B's traffic)
          break;
        case Role::Idle: break;
      }
    }
    // Pair the Tw1 slots for the sum cap.
    partner_.assign(layout_.m, -1);
    for (int j = 0; j + 1 < layout_.m; ++j) {
      if (layout_.vars[j].role == Role::Tw1 && layout_.vars[j].slot == 0 &&
          j + 1 < layout_.m && layout_.vars[j + 1].role == Role::Tw1 &&
          layout_.vars[j + 1].subcarrier == layout_.vars[j].subcarrier) {
        partner_[j] = j + 1;
        partner_[j + 1] = j;
      }
    }
  }

  const Lifted& layout() const { return layout_; }

  CapsEval caps(const std::vector<double>& z) const {
    CapsEval c;
    for (int j = 0; j < layout_.m; ++j) {
      const auto& v = layout_.vars[j];
      const double x = z[j] * gain1_[j];
      switch (v.role) {
        case Role::DtA: c.direct[0] += cap_rate(x); break;
        case Role::DtB: c.direct[1] += cap_rate(x); break;
        case Role::Ow1A: c.cap[0] += cap_rate(x); break;
        case Role::Ow2A: c.cap[1] += cap_rate(x); break;
        case Role::Ow1B: c.cap[2] += cap_rate(x); break;
        case Role::Ow2B: c.cap[3] += cap_rate(x); break;
        case Role::Tw1:
          if (v.slot == 0) {
            c.cap[4] += cap_rate(x);
            c.cap[6] += cap_rate(x + z[partner_[j]] * gain1_[partner_[j]]);
          } else {
            c.cap[5] += cap_rate(x);
          }
          break;
        case Role::Tw2:
          c.cap[7] += cap_rate(x);
          c.cap[8] += cap_rate(z[j] * gain2_[j]);
          break;
        case Role::Idle: break;
      }
    }
    return c;
  }

  // Constraint values g_i(z) <= 0.
  std::array<double, 9> constraints(const std::vector<double>& z) const {
    const CapsEval c = caps(z);
    const double rba = z[layout_.rb_a], rbb = z[layout_.rb_b];
    const double rca = z[layout_.rc_a], rcb = z[layout_.rc_b];
    return {rba - c.cap[0], rba - c.cap[1], rbb - c.cap[2],
            rbb - c.cap[3], rca - c.cap[4], rcb - c.cap[5],
            rca + rcb - c.cap[6], rca - c.cap[7], rcb - c.cap[8]};
  }

  double objective(const std::vector<double>& z) const {
    const CapsEval c = caps(z);
    return wt_a_ * (c.direct[0] + z[layout_.rb_a] + z[layout_.rc_a]) +
           wt_b_ * (c.direct[1] + z[layout_.rb_b] + z[layout_.rc_b]);
  }

  // Gradient of objective - sum_i y_i * g_i for given constraint weights y.
  void weighted_gradient(const std::vector<double>& z,
                         const std::array<double, 9>& y,
                         std::vector<double>& grad) const {
    grad.assign(layout_.dim, 0.0);
    grad[layout_.rb_a] = wt_a_ - y[0] - y[1];
    grad[layout_.rb_b] = wt_b_ - y[2] - y[3];
    grad[layout_.rc_a] = wt_a_ - y[4] - y[6] - y[7];
    grad[layout_.rc_b] = wt_b_ - y[5] - y[6] - y[8];
    for (int j = 0; j < layout_.m; ++j) {
      const auto& v = layout_.vars[j];
      const double g = gain1_[j];
      const double d1 = g / (kSigma * (1.0 + z[j] * g));
      switch (v.role) {
        case Role::DtA: grad[j] = wt_a_ * d1; break;
        case Role::DtB: grad[j] = wt_b_ * d1; break;
        case Role::Ow1A: grad[j] = y[0] * d1; break;
        case Role::Ow2A: grad[j] = y[1] * d1; break;
        case Role::Ow1B: grad[j] = y[2] * d1; break;
        case Role::Ow2B: grad[j] = y[3] * d1; break;
        case Role::Tw1: {
          const int p = partner_[j];
          const double tsum = z[j] * g + z[p] * gain1_[p];
          const double dsum = g / (kSigma * (1.0 + tsum));
          grad[j] = (v.slot == 0 ? y[4] : y[5]) * d1 + y[6] * dsum;
          break;
        }
        case Role::Tw2: {
          const double g2 = gain2_[j];
          const double d2 = g2 / (kSigma * (1.0 + z[j] * g2));
          grad[j] = y[7] * d1 + y[8] * d2;
          break;
        }
        case Role::Idle: break;
      }
    }
  }

  void project(std::vector<double>& z) const {
    project_budget(z, layout_.owned[0], inst_.p_a);
    project_budget(z, layout_.owned[1], inst_.p_b);
    project_budget(z, layout_.owned[2], inst_.p_r);
    for (int r = layout_.m; r < layout_.dim; ++r) z[r] = std::max(0.0, z[r]);
  }

  double budget(Node k) const { return inst_.budget(k); }

 private:
  const ProblemInstance& inst_;
  Lifted layout_;
  double wt_a_, wt_b_;
  std::vector<double> gain1_, gain2_;
  std::vector<int> partner_;
};

struct AlResult {
  std::vector<double> z;
  std::array<double, 9> nu{};
  double kkt = 0.0;
  double feas = 0.0;
};

AlResult augmented_lagrangian(const AssignmentProblem& prob, double kkt_tol,
                              double feas_tol, int max_outer, int max_inner) {
  const auto& l = prob.layout();
  std::vector<double> z(l.dim, 0.0);
  // Start from an even spread of a tenth of each budget.
  for (int k = 0; k < kNumNodes; ++k) {
    const auto& owned = l.owned[k];
    if (!owned.empty()) {
      const double p0 = 0.1 * prob.budget(static_cast<Node>(k)) /
                        static_cast<double>(owned.size());
      for (int j : owned) z[j] = p0;
    }
  }
  {
    const CapsEval c0 = prob.caps(z);
    z[l.rb_a] = std::min(c0.cap[0], c0.cap[1]);
    z[l.rb_b] = std::min(c0.cap[2], c0.cap[3]);
    z[l.rc_a] = std::min({c0.cap[4], c0.cap[6], c0.cap[7]});
    z[l.rc_b] = std::min({c0.cap[5], c0.cap[8]});
  }

  std::array<double, 9> nu{};
  double c = 4.0;
  double prev_viol = std::numeric_limits<double>::infinity();
  std::vector<double> grad(l.dim), znew(l.dim), zprev(l.dim), gprev(l.dim);
  AlResult res;

  const auto al_value = [&](const std::vector<double>& x) {
    const auto g = prob.constraints(x);
    double pen = 0.0;
    for (int i = 0; i < 9; ++i) {
      const double y = std::max(0.0, nu[i] + c * g[i]);
      pen += (y * y - nu[i] * nu[i]) / (2.0 * c);
    }
    return prob.objective(x) - pen;
  };
  const auto al_grad = [&](const std::vector<double>& x,
                           std::vector<double>& out) {
    const auto g = prob.constraints(x);
    std::array<double, 9> y{};
    for (int i = 0; i < 9; ++i) y[i] = std::max(0.0, nu[i] + c * g[i]);
    prob.weighted_gradient(x, y, out);
  };

  for (int outer = 0; outer < max_outer; ++outer) {
    // Inner: projected gradient ascent with Barzilai-Borwein steps.
    double step = 1.0;
    double val = al_value(z);
    al_grad(z, grad);
    for (int it = 0; it < max_inner; ++it) {
      zprev = z;
      gprev = grad;
      double t = step;
      double nval = 0.0;
      for (int bt = 0; bt < 40; ++bt) {
        znew = z;
        for (int j = 0; j < l.dim; ++j) znew[j] += t * grad[j];
        prob.project(znew);
        nval = al_value(znew);
        if (nval >= val - 1e-14 * (1.0 + std::fabs(val))) break;
        t *= 0.25;
      }
      double move = 0.0;
      for (int j = 0; j < l.dim; ++j) {
        move = std::max(move, std::fabs(znew[j] - z[j]));
      }
      z.swap(znew);
      val = nval;
      al_grad(z, grad);
      if (move < 1e-13 * (1.0 + std::fabs(val))) break;
      // BB step from the last displacement pair.
      double sy = 0.0, yy = 0.0;
      for (int j = 0; j < l.dim; ++j) {
        const double s = z[j] - zprev[j];
        const double dy = grad[j] - gprev[j];
        sy += s * dy;
        yy += dy * dy;
      }
      step = (yy > 0.0 && std::isfinite(sy)) ? std::fabs(sy) / yy : step * 2.0;
      step = std::clamp(step, 1e-12, 1e12);
    }

    // Multiplier update and stopping audit on the true Lagrangian.
    const auto g = prob.constraints(z);
    double viol = 0.0;
    for (int i = 0; i < 9; ++i) {
      nu[i] = std::max(0.0, nu[i] + c * g[i]);
      viol = std::max(viol, g[i]);
    }
    std::array<double, 9> y = nu;
    prob.weighted_gradient(z, y, grad);
    znew = z;
    for (int j = 0; j < l.dim; ++j) znew[j] += grad[j];
    prob.project(znew);
    double stat = 0.0;
    for (int j = 0; j < l.dim; ++j) {
      stat = std::max(stat, std::fabs(znew[j] - z[j]));
    }
    res.kkt = stat;
    res.feas = std::max(0.0, viol);
    if (res.feas <= feas_tol && res.kkt <= kkt_tol) break;
    if (viol > 0.25 * prev_viol && c < 1e9) c *= 4.0;
    prev_viol = std::max(viol, 1e-300);
  }
  res.z = std::move(z);
  res.nu = nu;
  return res;
}

OracleSolution finish_solution(const AssignmentProblem& prob,
                               const std::vector<Role>& assignment,
                               const ProblemInstance& inst, double wt_a,
                               double wt_b, const AlResult& al) {
  const auto& l = prob.layout();
  std::vector<SubcarrierDecision> decisions(assignment.size());
  for (size_t n = 0; n < assignment.size(); ++n) {
    decisions[n].role = assignment[n] == Role::Idle ? Role::Idle : assignment[n];
  }
  for (int j = 0; j < l.m; ++j) {
    const auto& v = l.vars[j];
    if (v.slot == 0) {
      decisions[v.subcarrier].power1 = al.z[j];
    } else {
      decisions[v.subcarrier].power2 = al.z[j];
    }
  }
  // Roles whose power ended at zero stay as assigned (zero-rate, still
  // exclusive); rates are recomputed from achievable caps so the reported
  // objective is always feasible.
  OracleSolution sol;
  sol.allocation = make_allocation(std::move(decisions));
  sol.rates = evaluate_rates(sol.allocation, inst, wt_a, wt_b);
  sol.objective = wt_a * sol.rates.user_total(Node::A) +
                  wt_b * sol.rates.user_total(Node::B);
  sol.kkt_residual = al.kkt;
  sol.feas_violation = al.feas;

  // Complementary slackness: slack budgets must have no positive marginal.
  std::vector<double> grad;
  prob.weighted_gradient(al.z, al.nu, grad);
  double cs = 0.0;
  for (int k = 0; k < kNumNodes; ++k) {
    const auto& owned = l.owned[k];
    if (owned.empty()) continue;
    double used = 0.0, marg = 0.0;
    for (int j : owned) {
      used += al.z[j];
      marg = std::max(marg, grad[j]);
    }
    const double slack = inst.budget(static_cast<Node>(k)) - used;
    cs = std::max(cs, std::min(std::max(0.0, slack), marg));
  }
  sol.budget_cs_residual = cs;
  return sol;
}

OracleSolution solve_assignment_weighted(const std::vector<Role>& assignment,
                                         const ProblemInstance& inst,
                                         double wt_a, double wt_b,
                                         double kkt_tol, double feas_tol,
                                         int max_outer, int max_inner) {
  AssignmentProblem prob(assignment, inst, wt_a, wt_b);
  const AlResult al =
      augmented_lagrangian(prob, kkt_tol, feas_tol, max_outer, max_inner);
  return finish_solution(prob, assignment, inst, wt_a, wt_b, al);
}

}  // namespace

OracleSolution convex_power_for_assignment(const std::vector<Role>& assignment,
                                           const ProblemInstance& inst,
                                           const OracleOptions& opts) {
  if (static_cast<int>(assignment.size()) != inst.n()) {
    throw std::invalid_argument("assignment length mismatch");
  }
  if (inst.n() > 16) throw TooLarge("convex_power_for_assignment: N > 16");
  return solve_assignment_weighted(assignment, inst, inst.w_a, inst.w_b,
                                   opts.kkt_tol, opts.feas_tol, opts.max_outer,
                                   opts.max_inner);
}

QosOracleResult convex_power_with_qos(const std::vector<Role>& assignment,
                                      const ProblemInstance& inst,
                                      const OracleOptions& opts,
                                      double mu_max) {
  QosOracleResult out;
  std::array<double, 2> mu{0.0, 0.0};
  const auto meets = [&](const OracleSolution& s) {
    return s.rates.user_total(Node::A) >= inst.r_a - 1e-9 &&
           s.rates.user_total(Node::B) >= inst.r_b - 1e-9;
  };
  const auto solve_mu = [&](const std::array<double, 2>& m) {
    return solve_assignment_weighted(assignment, inst, inst.w_a + m[0],
                                     inst.w_b + m[1], opts.kkt_tol,
                                     opts.feas_tol, opts.max_outer,
                                     opts.max_inner);
  };
  OracleSolution sol = solve_mu(mu);
  for (int round = 0; round < 40 && !meets(sol); ++round) {
    bool bumped = false;
    if (sol.rates.user_total(Node::A) < inst.r_a - 1e-9 && mu[0] < mu_max) {
      mu[0] = std::max(1.0, 2.0 * mu[0]);
      bumped = true;
    }
    if (sol.rates.user_total(Node::B) < inst.r_b - 1e-9 && mu[1] < mu_max) {
      mu[1] = std::max(1.0, 2.0 * mu[1]);
      bumped = true;
    }
    if (!bumped) break;
    sol = solve_mu(mu);
  }
  out.solution = std::move(sol);
  out.qos_feasible = meets(out.solution);
  out.mu = mu;
  return out;
}

ExhaustiveResult exhaustive_solve(const ProblemInstance& inst,
                                  const OracleOptions& opts, bool parallel) {
  const int n = inst.n();
  if (n > 6) throw TooLarge("exhaustive_solve: N > 6");
  long long total = 1;
  for (int i = 0; i < n; ++i) total *= 8;

  long long best_code = 0;
  double best_obj = -std::numeric_limits<double>::infinity();

#pragma omp parallel if (parallel)
  {
    long long local_code = 0;
    double local_obj = -std::numeric_limits<double>::infinity();
    std::vector<Role> assignment(n);
#pragma omp for schedule(dynamic, 64) nowait
    for (long long code = 0; code < total; ++code) {
      long long c = code;
      for (int i = 0; i < n; ++i) {
        assignment[i] = static_cast<Role>(c % 8);
        c /= 8;
      }
      const OracleSolution sol = solve_assignment_weighted(
          assignment, inst, inst.w_a, inst.w_b, opts.scan_kkt_tol,
          opts.scan_feas_tol, opts.max_outer, opts.scan_max_inner);
      if (sol.objective > local_obj ||
          (sol.objective == local_obj && code < local_code)) {
        local_obj = sol.objective;
        local_code = code;
      }
    }
#pragma omp critical
    {
      if (local_obj > best_obj ||
          (local_obj == best_obj && local_code < best_code)) {
        best_obj = local_obj;
        best_code = local_code;
      }
    }
  }

  ExhaustiveResult res;
  res.assignment.resize(n);
  long long c = best_code;
  for (int i = 0; i < n; ++i) {
    res.assignment[i] = static_cast<Role>(c % 8);
    c /= 8;
  }
  res.solution = convex_power_for_assignment(res.assignment, inst, opts);
  res.objective = res.solution.objective;
  return res;
}

std::pair<double, double> set_basis_region_point(
    const ProblemInstance& inst, const std::vector<int>& mac_set,
    const std::vector<int>& bc_set, bool equal_power, double w_a, double w_b) {
  for (int i : mac_set) {
    for (int j : bc_set) {
      if (i == j) throw std::invalid_argument("mac/bc sets must be disjoint");
    }
  }
  if (mac_set.empty() || bc_set.empty()) return {0.0, 0.0};

  if (!equal_power) {
    // Optimal powers for the fixed two-way assignment via the convex oracle.
    std::vector<Role> assignment(inst.n(), Role::Idle);
    for (int i : mac_set) assignment[i] = Role::Tw1;
    for (int j : bc_set) assignment[j] = Role::Tw2;
    const OracleSolution sol =
        solve_assignment_weighted(assignment, inst, w_a, w_b, 1e-7, 1e-9, 80, 6000);
    return {sol.rates.rate[0][static_cast<int>(Mode::TwoWay)],
            sol.rates.rate[1][static_cast<int>(Mode::TwoWay)]};
  }

  const auto& ch = inst.channels;
  const double pa = inst.p_a / static_cast<double>(mac_set.size());
  const double pb = inst.p_b / static_cast<double>(mac_set.size());
  const double pr = inst.p_r / static_cast<double>(bc_set.size());
  double a1 = 0.0, b1 = 0.0, sum1 = 0.0, a2 = 0.0, b2 = 0.0;
  for (int i : mac_set) {
    const double xa = pa * ch.gain(Link::AR, i);
    const double xb = pb * ch.gain(Link::BR, i);
    a1 += cap_rate(xa);
    b1 += cap_rate(xb);
    sum1 += cap_rate(xa + xb);
  }
  for (int j : bc_set) {
    a2 += cap_rate(pr * ch.gain(Link::RB, j));
    b2 += cap_rate(pr * ch.gain(Link::RA, j));
  }
  return best_region_split(std::min(a1, a2), std::min(b1, b2), sum1, w_a, w_b);
}

SetBasisBest best_set_basis(const ProblemInstance& inst) {
  const int n = inst.n();
  if (n > 12) throw TooLarge("best_set_basis: N > 12");
  const auto& ch = inst.channels;

  // Per-subcarrier capacity tables indexed by the occupied-set size, so each
  // partition evaluates with table lookups only.
  std::vector<std::array<double, 5>> table(
      static_cast<size_t>(n) * static_cast<size_t>(n + 1));
  const auto at = [&](int sc, int m) -> std::array<double, 5>& {
    return table[static_cast<size_t>(sc) * (n + 1) + m];
  };
  for (int sc = 0; sc < n; ++sc) {
    for (int m = 1; m <= n; ++m) {
      const double xa = inst.p_a / m * ch.gain(Link::AR, sc);
      const double xb = inst.p_b / m * ch.gain(Link::BR, sc);
      const double pr = inst.p_r / m;
      at(sc, m) = {cap_rate(xa), cap_rate(xb), cap_rate(xa + xb),
                   cap_rate(pr * ch.gain(Link::RB, sc)),
                   cap_rate(pr * ch.gain(Link::RA, sc))};
    }
  }

  long long total = 1;
  for (int i = 0; i < n; ++i) total *= 3;

  SetBasisBest best;
  std::vector<int> digits(n);
  for (long long code = 0; code < total; ++code) {
    long long c = code;
    int m1 = 0, m2 = 0;
    for (int i = 0; i < n; ++i) {
      digits[i] = static_cast<int>(c % 3);
      c /= 3;
      if (digits[i] == 1) ++m1;
      if (digits[i] == 2) ++m2;
    }
    if (m1 == 0 || m2 == 0) continue;
    double a1 = 0, b1 = 0, sum1 = 0, a2 = 0, b2 = 0;
    for (int i = 0; i < n; ++i) {
      if (digits[i] == 1) {
        const auto& t = at(i, m1);
        a1 += t[0];
        b1 += t[1];
        sum1 += t[2];
      } else if (digits[i] == 2) {
        const auto& t = at(i, m2);
        a2 += t[3];
        b2 += t[4];
      }
    }
    const auto split =
        best_region_split(std::min(a1, a2), std::min(b1, b2), sum1, 1.0, 1.0);
    const double value = split.first + split.second;
    if (value > best.sum_rate) {
      best.sum_rate = value;
      best.split = split;
      best.mac_set.clear();
      best.bc_set.clear();
      for (int i = 0; i < n; ++i) {
        if (digits[i] == 1) best.mac_set.push_back(i);
        if (digits[i] == 2) best.bc_set.push_back(i);
      }
    }
  }
  return best;
}

double pairing_baseline(const ProblemInstance& inst, bool equal_power) {
  const int n = inst.n();
  if (n % 2 != 0 || n > 8 || n < 2) {
    throw TooLarge("pairing_baseline: N must be even and <= 8");
  }
  if (!equal_power) {
    throw std::invalid_argument("pairing_baseline: only equal power defined");
  }
  const auto& ch = inst.channels;
  const int half = n / 2;
  const double pa = inst.p_a / half;
  const double pb = inst.p_b / half;
  const double pr = inst.p_r / half;

  // Per (MAC subcarrier, BC subcarrier) pair sum rate.
  std::vector<double> pair_value(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double xa = pa * ch.gain(Link::AR, i);
    const double xb = pb * ch.gain(Link::BR, i);
    const double a1 = cap_rate(xa), b1 = cap_rate(xb), s1 = cap_rate(xa + xb);
    for (int j = 0; j < n; ++j) {
      const double a2 = cap_rate(pr * ch.gain(Link::RB, j));
      const double b2 = cap_rate(pr * ch.gain(Link::RA, j));
      const auto split = best_region_split(std::min(a1, a2), std::min(b1, b2),
                                           s1, 1.0, 1.0);
      pair_value[static_cast<size_t>(i) * n + j] = split.first + split.second;
    }
  }

  double best = 0.0;
  for (int mask = 0; mask < (1 << n); ++mask) {
    if (__builtin_popcount(static_cast<unsigned>(mask)) != half) continue;
    std::vector<int> mac, bc;
    for (int i = 0; i < n; ++i) {
      if (mask & (1 << i)) mac.push_back(i);
      else bc.push_back(i);
    }
    std::sort(bc.begin(), bc.end());
    do {
      double value = 0.0;
      for (int k = 0; k < half; ++k) {
        value += pair_value[static_cast<size_t>(mac[k]) * n + bc[k]];
      }
      best = std::max(best, value);
    } while (std::next_permutation(bc.begin(), bc.end()));
  }
  return best;
}

}  // namespace birelay
