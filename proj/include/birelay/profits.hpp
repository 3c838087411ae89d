#pragma once

#include <array>
#include <vector>

#include "birelay/types.hpp"

namespace birelay {

/// Per-subcarrier profits of the eight non-idle roles, in Role order:
/// (H_A^a, H_B^a, H_A^b1, H_B^b1, H_A^b2, H_B^b2, H^c1, H^c2).
/// Masked roles carry -infinity.
struct ProfitVector {
  std::array<double, kNumActiveRoles> value{};
};

/// Transmission-scheme restriction: which roles may be assigned and which
/// dual variables are active in the ellipsoid search.
struct SchemeMask {
  std::array<bool, kNumActiveRoles> role_allowed{};
  std::vector<int> active_duals;  // DualIndex values, ascending
  bool relay_active = false;      // whether alpha_R P_R enters the dual

  bool allows(Role r) const { return role_allowed[static_cast<int>(r)]; }
};

enum class Scheme : int { Proposed = 0, BM1, BM2 };
const char* scheme_name(Scheme s);
SchemeMask scheme_mask(Scheme s);

/// Profits plus the maximizing inner powers for one subcarrier at a dual
/// point. power1/power2 follow the SubcarrierDecision convention.
struct SubcarrierProfits {
  ProfitVector profits;
  std::array<double, kNumActiveRoles> power1{};
  double tw1_power_b = 0.0;
};

SubcarrierProfits compute_profits(int n, const DualPoint& dual,
                                  const ProblemInstance& inst,
                                  const SchemeMask& mask,
                                  double mac_newton_tol = 1e-12);

/// Argmax role of a profit vector; ties break toward the lowest index and a
/// maximum of zero (or below) yields Idle.
Role assign_subcarrier(const ProfitVector& profits);

/// Result of one full inner maximization of the Lagrangian at a dual point.
struct InnerResult {
  double dual_value = 0.0;  ///< g(dual): profit sum + alpha'P - mu'r
  std::array<double, kNumDuals> subgradient{};
  std::vector<SubcarrierDecision> decisions;
  std::array<double, kNumNodes> consumed{};
};

/// Evaluates every subcarrier's profit argmax and accumulates the dual value
/// and the subgradient of Proposition 3. The per-subcarrier pass may run
/// under OpenMP (parallel=true); accumulation is serial in subcarrier order,
/// so results are bit-identical for any thread count.
InnerResult inner_maximize(const ProblemInstance& inst, const DualPoint& dual,
                           const SchemeMask& mask, bool parallel,
                           double mac_newton_tol = 1e-12);

}  // namespace birelay
