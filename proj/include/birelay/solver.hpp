#pragma once

#include <optional>
#include <vector>

#include "birelay/ellipsoid.hpp"
#include "birelay/profits.hpp"
#include "birelay/rates.hpp"
#include "birelay/types.hpp"

namespace birelay {

struct SolverOptions {
  double stop_tol = 1e-4;   ///< ellipsoid stop on sqrt(g'Pg)
  int iter_cap = 5000;
  double alpha_min = 1e-8;  ///< power prices are cut back above this floor
  double mu_ceiling = 1e30; ///< early outage exit when a mu escapes past this
  double mac_newton_tol = 1e-12;
  bool oracle_check = false;  ///< debug: verify inner powers per iteration
  bool parallel = false;      ///< OpenMP per-subcarrier kernel
  bool track_best_primal = true;
};

/// Starting dual point and ellipsoid radius (flat-channel budget-spending
/// prices; radius covers the weight and price scales).
struct DualInit {
  DualPoint point;
  double radius = 10.0;
};
DualInit initial_dual(const ProblemInstance& inst, const SchemeMask& mask,
                      double alpha_min);

/// Per-iteration record for diagnostics and invariant tests.
struct IterRecord {
  CutKind kind = CutKind::Objective;
  double dual_value = 0.0;     // objective cuts only
  double primal_objective = 0.0;
  bool primal_feasible = false;
  double stop_norm = 0.0;      // sqrt(g'Pg) at this iterate
  std::vector<Role> roles;     // filled only when record_roles is set
};
struct SolveTrace {
  bool record_roles = false;
  std::vector<IterRecord> iterations;
};

/// Scales any overspending node's powers down to its budget (shaved by one
/// part in 1e12 so the recomputed sums stay strictly feasible) and leaves
/// underspenders untouched.
Allocation recover_primal(std::vector<SubcarrierDecision> decisions,
                          const ProblemInstance& inst);

/// The dual subgradient restricted to the active dual coordinates.
Eigen::VectorXd restrict_vector(const std::array<double, kNumDuals>& full,
                                const std::vector<int>& active);

/// Algorithm 1: ellipsoid iteration over the active duals with per-subcarrier
/// profit argmax, per-iterate primal recovery, and the final QoS/outage check.
SolveOutcome solve(const ProblemInstance& inst, const SolverOptions& opts = {},
                   const SchemeMask& mask = scheme_mask(Scheme::Proposed),
                   SolveTrace* trace = nullptr);

}  // namespace birelay
