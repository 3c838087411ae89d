#pragma once

#include <utility>
#include <vector>

#include "birelay/types.hpp"

namespace birelay {

struct TooLarge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct OracleOptions {
  double kkt_tol = 1e-7;    ///< projected-gradient stationarity target
  double feas_tol = 1e-9;   ///< rate-coupling violation target
  int max_outer = 80;
  int max_inner = 6000;
  /// Looser tolerances used while enumerating assignments; the winner is
  /// re-solved at the tight tolerances above.
  double scan_kkt_tol = 1e-5;
  double scan_feas_tol = 1e-7;
  int scan_max_inner = 1500;
};

/// Optimal-power solution for a fixed role assignment (weighted problem,
/// QoS off). Solved by augmented-Lagrangian projected gradient in the lifted
/// (powers, rate-variables) space; independent of the dual solver's
/// water-filling machinery.
struct OracleSolution {
  Allocation allocation;
  PerModeRates rates;
  double objective = 0.0;
  double kkt_residual = 0.0;
  double feas_violation = 0.0;
  /// max over nodes of min(budget slack, positive marginal value): budgets
  /// are tight or worthless at an optimum.
  double budget_cs_residual = 0.0;
};

OracleSolution convex_power_for_assignment(const std::vector<Role>& assignment,
                                           const ProblemInstance& inst,
                                           const OracleOptions& opts = {});

/// QoS hook: sweeps per-user multipliers mu by doubling + bisection until the
/// weighted solution meets the rate floors, or reports infeasibility.
struct QosOracleResult {
  OracleSolution solution;
  bool qos_feasible = false;
  std::array<double, 2> mu{0.0, 0.0};
};
QosOracleResult convex_power_with_qos(const std::vector<Role>& assignment,
                                      const ProblemInstance& inst,
                                      const OracleOptions& opts = {},
                                      double mu_max = 1e4);

/// Ground-truth optimum of P1 (r = 0) by enumerating all 8^N assignments.
/// Throws TooLarge for N > 6.
struct ExhaustiveResult {
  std::vector<Role> assignment;
  double objective = 0.0;
  OracleSolution solution;
};
ExhaustiveResult exhaustive_solve(const ProblemInstance& inst,
                                  const OracleOptions& opts = {},
                                  bool parallel = true);

/// Two-way rate pair of the parallel-channel DF region for given disjoint
/// MAC/BC subcarrier sets under equal per-subcarrier power, at the
/// weighted-sum-optimal vertex.
std::pair<double, double> set_basis_region_point(
    const ProblemInstance& inst, const std::vector<int>& mac_set,
    const std::vector<int>& bc_set, bool equal_power = true, double w_a = 1.0,
    double w_b = 1.0);

/// Best subcarrier-set partition (each subcarrier MAC, BC, or idle) under
/// equal power; exhaustive over 3^N. Throws TooLarge for N > 12.
struct SetBasisBest {
  double sum_rate = 0.0;
  std::pair<double, double> split{0.0, 0.0};
  std::vector<int> mac_set, bc_set;
};
SetBasisBest best_set_basis(const ProblemInstance& inst);

/// Conventional subcarrier-pairing baseline: MAC half + perfect matching to
/// the BC half, equal power, exhaustive over C(N,N/2)*(N/2)! choices.
/// Throws TooLarge for odd N or N > 8.
double pairing_baseline(const ProblemInstance& inst, bool equal_power = true);

}  // namespace birelay
