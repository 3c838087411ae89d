#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace birelay {

/// Thrown by validators when a construction-time invariant fails.
/// invariant() names the violated rule (e.g. "gain_length").
class InvariantViolation : public std::runtime_error {
 public:
  InvariantViolation(std::string invariant, const std::string& detail)
      : std::runtime_error(invariant + ": " + detail),
        invariant_(std::move(invariant)) {}
  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

/// Directed links between the users A, B and the relay R.
enum class Link : int { AB = 0, BA, AR, BR, RA, RB };
inline constexpr int kNumLinks = 6;
const char* link_key(Link link);

enum class Node : int { A = 0, B, R };
inline constexpr int kNumNodes = 3;

/// Per-subcarrier transmission roles, in the fixed profit order used for
/// argmax tie-breaking. Naming is by traffic session: Ow2A carries A's
/// traffic on its second hop, i.e. the relay transmits towards B.
/// Tw1 is the two-way MAC phase (both users to the relay), Tw2 the BC phase.
enum class Role : int { DtA = 0, DtB, Ow1A, Ow1B, Ow2A, Ow2B, Tw1, Tw2, Idle };
inline constexpr int kNumActiveRoles = 8;
const char* role_name(Role role);

/// Node positions on a line, kilometers.
struct NodeGeometry {
  double pos_a_km = 0.0;
  double pos_b_km = 2.0;
  double pos_r_km = 1.0;

  double dist_ab_km() const;
  double dist_ar_km() const;
  double dist_br_km() const;
};

/// Throws InvariantViolation("distinct_endpoints" | "relay_inside_segment").
void validate_geometry(const NodeGeometry& g);

/// Squared channel magnitudes |h|^2 per directed link and subcarrier, linear
/// power-gain units with the noise variance normalized to 1.
struct ChannelRealization {
  int n_subcarriers = 0;
  std::array<std::vector<double>, kNumLinks> gains;

  const std::vector<double>& link(Link l) const {
    return gains[static_cast<int>(l)];
  }
  std::vector<double>& link(Link l) { return gains[static_cast<int>(l)]; }
  double gain(Link l, int n) const { return gains[static_cast<int>(l)][n]; }
};

void validate_channels(const ChannelRealization& ch);

/// One fading frame plus the optimization data of problem P1.
struct ProblemInstance {
  ChannelRealization channels;
  double w_a = 1.0, w_b = 1.0;  ///< objective weights
  double r_a = 0.0, r_b = 0.0;  ///< QoS rate floors, bits/OFDM symbol
  double p_a = 1.0, p_b = 1.0, p_r = 1.0;  ///< peak power budgets, linear

  int n() const { return channels.n_subcarriers; }
  double weight(Node k) const { return k == Node::A ? w_a : w_b; }
  double qos(Node k) const { return k == Node::A ? r_a : r_b; }
  double budget(Node k) const {
    return k == Node::A ? p_a : (k == Node::B ? p_b : p_r);
  }
};

/// Returns the instance unchanged iff all invariants hold, otherwise throws
/// InvariantViolation naming the failed rule.
const ProblemInstance& validate_instance(const ProblemInstance& inst);

/// Index order of the ten stored multipliers in vector form.
enum DualIndex : int {
  kLamB1A = 0,
  kLamB1B,
  kLamC1A,
  kLamC1B,
  kLamAbC,
  kMuA,
  kMuB,
  kAlphaA,
  kAlphaB,
  kAlphaR,
};
inline constexpr int kNumDuals = 10;

/// The ten stored Lagrange multipliers together with the objective weights
/// they are tied to. Second-hop multipliers are derived, never stored:
///   lam_b2[k] = w_k + mu_k - lam_b1[k]
///   lam_c2[k] = xi[k] = w_k + mu_k - lam_c1[k] - lam_ab_c
struct DualPoint {
  double w_a = 1.0, w_b = 1.0;
  std::array<double, 2> lam_b1{0.0, 0.0};  // indexed by Node::A / Node::B
  std::array<double, 2> lam_c1{0.0, 0.0};
  double lam_ab_c = 0.0;
  std::array<double, 2> mu{0.0, 0.0};
  std::array<double, 3> alpha{1.0, 1.0, 1.0};  // A, B, R

  double weight(Node k) const { return k == Node::A ? w_a : w_b; }
  /// QoS-adjusted water level numerator w_k + mu_k.
  double level(Node k) const {
    return weight(k) + mu[static_cast<int>(k)];
  }
  double lam_b2(Node k) const {
    return level(k) - lam_b1[static_cast<int>(k)];
  }
  double xi(Node k) const {
    return level(k) - lam_c1[static_cast<int>(k)] - lam_ab_c;
  }

  std::array<double, kNumDuals> to_vector() const;
  static DualPoint from_vector(const std::array<double, kNumDuals>& v,
                               double w_a, double w_b);
};

/// Checks nonnegativity of the ten stored multipliers and the boundedness
/// constraints (34c)/(34d) that keep the derived multipliers nonnegative.
void validate_dual(const DualPoint& d);

/// Role plus the consumed powers on one subcarrier. power1 is the only power
/// for every single-power role (source power for DT/OW1, relay power for
/// OW2/TW2); Tw1 carries the pair (power1 = p_{A->R}, power2 = p_{B->R}).
struct SubcarrierDecision {
  Role role = Role::Idle;
  double power1 = 0.0;
  double power2 = 0.0;
};

void validate_decision(const SubcarrierDecision& d);

/// Full per-frame assignment with cached per-node power totals.
/// A pays DtA, Ow1A and the Tw1 first slot; B symmetrically; R pays Ow2A,
/// Ow2B and Tw2.
struct Allocation {
  std::vector<SubcarrierDecision> decisions;
  std::array<double, kNumNodes> node_power_used{0.0, 0.0, 0.0};

  double used(Node k) const { return node_power_used[static_cast<int>(k)]; }
};

/// Sums consumed powers per paying node in subcarrier order.
std::array<double, kNumNodes> compute_node_power(
    const std::vector<SubcarrierDecision>& decisions);

/// Builds an Allocation with the cached totals; throws on negative powers or
/// powers attached to roles that do not carry them.
Allocation make_allocation(std::vector<SubcarrierDecision> decisions);

/// Throws InvariantViolation("node_power_cache") if the cached totals do not
/// match a recomputation, or propagates per-decision violations.
void validate_allocation(const Allocation& alloc);

enum class Mode : int { Direct = 0, OneWay, TwoWay };
inline constexpr int kNumModes = 3;
const char* mode_name(Mode m);

/// Per-user, per-mode end-to-end rates, bits/OFDM symbol.
struct PerModeRates {
  // [user][mode], user 0 = A, 1 = B
  std::array<std::array<double, kNumModes>, 2> rate{};

  double user_total(Node k) const {
    const auto& r = rate[static_cast<int>(k)];
    return r[0] + r[1] + r[2];
  }
  double mode_total(Mode m) const {
    return rate[0][static_cast<int>(m)] + rate[1][static_cast<int>(m)];
  }
};

/// Result of one solver run (Algorithm 1). On outage the reported rates and
/// objective are zeroed while diag_* retain the pre-zeroing values.
struct SolveOutcome {
  double rate_a = 0.0;
  double rate_b = 0.0;
  PerModeRates per_mode;
  double objective = 0.0;
  bool outage = false;
  int iterations = 0;
  bool converged = false;  ///< ellipsoid stop reached before the cap
  double dual_value = 0.0;
  double gap_estimate = 0.0;  ///< dual_value - diag_objective
  Allocation allocation;

  // Pre-zeroing diagnostics (equal to the reported values when !outage).
  double diag_rate_a = 0.0;
  double diag_rate_b = 0.0;
  double diag_objective = 0.0;
};

}  // namespace birelay
