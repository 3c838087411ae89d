#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "birelay/channel.hpp"
#include "birelay/solver.hpp"

namespace birelay {

/// One Monte Carlo scenario: grids over SNR, relay position, and QoS points,
/// for a set of schemes sharing channel realizations.
struct ScenarioConfig {
  std::vector<Scheme> schemes{Scheme::Proposed, Scheme::BM1, Scheme::BM2};
  std::vector<double> snr_db{10, 15, 20, 25, 30};
  int n_trials = 50;
  std::vector<std::array<double, 2>> qos_points{{0.0, 0.0}};
  std::vector<double> relay_positions{0.5};  // fraction of the A-B segment
  double w_a = 1.0, w_b = 1.0;
  ChannelConfig channel;  // template; relay position and seed set per cell
  std::uint64_t master_seed = 1;
  SolverOptions solver;
  int threads = 0;  ///< worker threads for trials; 0 = OpenMP default
};

void validate_scenario(const ScenarioConfig& cfg);
ScenarioConfig scenario_from_json(const nlohmann::json& j);
ScenarioConfig load_scenario(const std::string& path);

/// Numeric result table with one label column (scheme).
struct ResultTable {
  std::vector<std::string> columns;  // first column is "scheme"
  struct Row {
    std::string scheme;
    std::vector<double> values;
  };
  std::vector<Row> rows;
};

/// Writes header + rows, floats with 9 significant digits. Throws
/// std::runtime_error with the path on IO failure.
void emit_csv(const ResultTable& table, const std::string& path);
std::string csv_to_string(const ResultTable& table);

/// Content-addressed trial seed: identical for a cell regardless of the
/// surrounding grid, so extending a sweep never perturbs existing cells.
std::uint64_t trial_seed(std::uint64_t master, double snr_db, double relay_pos,
                         double r_a, double r_b, int trial);

/// Builds the instance of one (cell, trial): seeded channel draw plus
/// budgets 10^(snr/10) at all three nodes.
ProblemInstance make_trial_instance(const ScenarioConfig& cfg, double snr_db,
                                    double relay_pos, double r_a, double r_b,
                                    int trial);

/// Solver run under a scheme's role mask and reduced dual dimension.
SolveOutcome run_scheme(const ProblemInstance& inst, Scheme scheme,
                        const SolverOptions& opts);

/// Optional per-outcome observer, invoked from worker threads (synchronize
/// inside the callback).
using SweepObserver =
    std::function<void(const ProblemInstance&, Scheme, const SolveOutcome&)>;

/// Full Monte Carlo sweep: one row per (snr, relay position, qos) cell and
/// scheme, aggregated over trials. Trials run in an OpenMP pool; rows are
/// emitted in deterministic cell order.
ResultTable sweep(const ScenarioConfig& cfg,
                  const SweepObserver& observer = {});

/// Subcarrier-set region vs pairing comparison (equal power): one row per
/// (snr, trial) with both sum rates.
ResultTable region_comparison(const ScenarioConfig& cfg);

/// Dual solver vs exhaustive oracle on small-N instances: one row per
/// (snr, trial) with primal, dual, and oracle objectives.
ResultTable oracle_check(const ScenarioConfig& cfg);

}  // namespace birelay
