#include "birelay/types.hpp"

#include <cmath>
#include <cstdio>

namespace birelay {

namespace {

std::string fmt_index(const char* what, int i) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s %d", what, i);
  return buf;
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

const char* link_key(Link link) {
  switch (link) {
    case Link::AB: return "ab";
    case Link::BA: return "ba";
    case Link::AR: return "ar";
    case Link::BR: return "br";
    case Link::RA: return "ra";
    case Link::RB: return "rb";
  }
  return "?";
}

const char* role_name(Role role) {
  switch (role) {
    case Role::DtA: return "DT-A";
    case Role::DtB: return "DT-B";
    case Role::Ow1A: return "OW1-A";
    case Role::Ow1B: return "OW1-B";
    case Role::Ow2A: return "OW2-A";
    case Role::Ow2B: return "OW2-B";
    case Role::Tw1: return "TW1";
    case Role::Tw2: return "TW2";
    case Role::Idle: return "IDLE";
  }
  return "?";
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Direct: return "dt";
    case Mode::OneWay: return "ow";
    case Mode::TwoWay: return "tw";
  }
  return "?";
}

double NodeGeometry::dist_ab_km() const { return std::fabs(pos_b_km - pos_a_km); }
double NodeGeometry::dist_ar_km() const { return std::fabs(pos_r_km - pos_a_km); }
double NodeGeometry::dist_br_km() const { return std::fabs(pos_r_km - pos_b_km); }

void validate_geometry(const NodeGeometry& g) {
  if (!(g.dist_ab_km() > 0.0)) {
    throw InvariantViolation("distinct_endpoints", "pos_a must differ from pos_b");
  }
  const double lo = std::fmin(g.pos_a_km, g.pos_b_km);
  const double hi = std::fmax(g.pos_a_km, g.pos_b_km);
  if (!(g.pos_r_km > lo && g.pos_r_km < hi)) {
    throw InvariantViolation("relay_inside_segment",
                             "relay must lie strictly between A and B");
  }
}

void validate_channels(const ChannelRealization& ch) {
  if (ch.n_subcarriers <= 0) {
    throw InvariantViolation("n_positive", "n_subcarriers must be positive");
  }
  for (int l = 0; l < kNumLinks; ++l) {
    const auto& seq = ch.gains[l];
    if (static_cast<int>(seq.size()) != ch.n_subcarriers) {
      throw InvariantViolation(
          "gain_length",
          std::string(link_key(static_cast<Link>(l))) + " has wrong length");
    }
    for (size_t n = 0; n < seq.size(); ++n) {
      if (!finite_nonneg(seq[n])) {
        throw InvariantViolation(
            "gain_nonneg_finite",
            std::string(link_key(static_cast<Link>(l))) + " at " +
                fmt_index("subcarrier", static_cast<int>(n)));
      }
    }
  }
}

const ProblemInstance& validate_instance(const ProblemInstance& inst) {
  validate_channels(inst.channels);
  if (!(inst.p_a > 0.0) || !(inst.p_b > 0.0) || !(inst.p_r > 0.0)) {
    throw InvariantViolation("budget_positive", "all power budgets must be > 0");
  }
  if (!(inst.r_a >= 0.0) || !(inst.r_b >= 0.0)) {
    throw InvariantViolation("qos_nonneg", "rate floors must be >= 0");
  }
  if (!(inst.w_a >= 0.0) || !(inst.w_b >= 0.0)) {
    throw InvariantViolation("weight_nonneg", "weights must be >= 0");
  }
  if (!(inst.w_a + inst.w_b > 0.0)) {
    throw InvariantViolation("weight_sum_positive", "w_a + w_b must be > 0");
  }
  return inst;
}

std::array<double, kNumDuals> DualPoint::to_vector() const {
  return {lam_b1[0], lam_b1[1], lam_c1[0], lam_c1[1], lam_ab_c,
          mu[0],     mu[1],     alpha[0],  alpha[1],  alpha[2]};
}

DualPoint DualPoint::from_vector(const std::array<double, kNumDuals>& v,
                                 double w_a, double w_b) {
  DualPoint d;
  d.w_a = w_a;
  d.w_b = w_b;
  d.lam_b1 = {v[kLamB1A], v[kLamB1B]};
  d.lam_c1 = {v[kLamC1A], v[kLamC1B]};
  d.lam_ab_c = v[kLamAbC];
  d.mu = {v[kMuA], v[kMuB]};
  d.alpha = {v[kAlphaA], v[kAlphaB], v[kAlphaR]};
  return d;
}

void validate_dual(const DualPoint& d) {
  const auto v = d.to_vector();
  for (int i = 0; i < kNumDuals; ++i) {
    if (!finite_nonneg(v[i])) {
      throw InvariantViolation("dual_nonneg", fmt_index("component", i));
    }
  }
  for (Node k : {Node::A, Node::B}) {
    if (d.lam_b2(k) < 0.0) {
      throw InvariantViolation("lam_b1_bounded",
                               "lam_b1 exceeds w_k + mu_k");
    }
    if (d.xi(k) < 0.0) {
      throw InvariantViolation("lam_c1_bounded",
                               "lam_c1 + lam_ab_c exceeds w_k + mu_k");
    }
  }
}

void validate_decision(const SubcarrierDecision& d) {
  if (!finite_nonneg(d.power1) || !finite_nonneg(d.power2)) {
    throw InvariantViolation("power_nonneg", role_name(d.role));
  }
  const bool has_second = d.role == Role::Tw1;
  if (!has_second && d.power2 != 0.0) {
    throw InvariantViolation("single_power_role",
                             std::string(role_name(d.role)) +
                                 " cannot carry a second power");
  }
  if (d.role == Role::Idle && d.power1 != 0.0) {
    throw InvariantViolation("idle_zero_power", "IDLE carries no power");
  }
}

std::array<double, kNumNodes> compute_node_power(
    const std::vector<SubcarrierDecision>& decisions) {
  std::array<double, kNumNodes> used{0.0, 0.0, 0.0};
  for (const auto& d : decisions) {
    switch (d.role) {
      case Role::DtA:
      case Role::Ow1A:
        used[0] += d.power1;
        break;
      case Role::DtB:
      case Role::Ow1B:
        used[1] += d.power1;
        break;
      case Role::Ow2A:
      case Role::Ow2B:
      case Role::Tw2:
        used[2] += d.power1;
        break;
      case Role::Tw1:
        used[0] += d.power1;
        used[1] += d.power2;
        break;
      case Role::Idle:
        break;
    }
  }
  return used;
}

Allocation make_allocation(std::vector<SubcarrierDecision> decisions) {
  for (const auto& d : decisions) validate_decision(d);
  Allocation alloc;
  alloc.decisions = std::move(decisions);
  alloc.node_power_used = compute_node_power(alloc.decisions);
  return alloc;
}

void validate_allocation(const Allocation& alloc) {
  for (const auto& d : alloc.decisions) validate_decision(d);
  const auto recomputed = compute_node_power(alloc.decisions);
  for (int k = 0; k < kNumNodes; ++k) {
    if (recomputed[k] != alloc.node_power_used[k]) {
      throw InvariantViolation("node_power_cache", fmt_index("node", k));
    }
  }
}

}  // namespace birelay
