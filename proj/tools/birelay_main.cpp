#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "birelay/experiments.hpp"
#include "birelay/io.hpp"

namespace {

using namespace birelay;

struct CommonFlags {
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int trials = 0;
  int threads = 0;
};

void apply_overrides(ScenarioConfig& cfg, const CommonFlags& flags,
                     CLI::App* cmd) {
  if (cmd->count("--seed")) cfg.master_seed = flags.seed;
  if (cmd->count("--trials")) cfg.n_trials = flags.trials;
  if (cmd->count("--threads")) cfg.threads = flags.threads;
}

void write_table(const ResultTable& table, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << csv_to_string(table);
  } else {
    emit_csv(table, out);
    std::fprintf(stderr, "wrote %zu rows to %s\n", table.rows.size(),
                 out.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OFDM bidirectional DF relay resource allocation"};
  app.require_subcommand(1);

  // solve
  std::string instance_path, solve_out, scheme_name_arg = "proposed";
  SolverOptions solve_opts;
  auto* solve_cmd = app.add_subcommand("solve", "solve one instance file");
  solve_cmd->add_option("instance", instance_path, "instance JSON")->required();
  solve_cmd->add_option("--out", solve_out, "output JSON path (default stdout)");
  solve_cmd->add_option("--scheme", scheme_name_arg, "proposed|bm1|bm2");
  solve_cmd->add_option("--stop-tol", solve_opts.stop_tol, "ellipsoid stop");
  solve_cmd->add_option("--iter-cap", solve_opts.iter_cap, "iteration cap");
  solve_cmd->add_option("--alpha-min", solve_opts.alpha_min, "price floor");
  solve_cmd->add_option("--mu-ceiling", solve_opts.mu_ceiling, "mu ceiling");
  solve_cmd->add_option("--mac-newton-tol", solve_opts.mac_newton_tol,
                        "MAC Newton residual target");
  solve_cmd->add_flag("--oracle-check", solve_opts.oracle_check,
                      "audit inner powers every iteration");
  solve_cmd->add_flag("--parallel", solve_opts.parallel,
                      "OpenMP per-subcarrier kernel");

  // grid subcommands share flags
  CommonFlags flags;
  std::string scenario_path;
  const auto add_grid = [&](const char* name, const char* help) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("scenario", scenario_path, "scenario JSON")->required();
    cmd->add_option("--out", flags.out, "output CSV path (default stdout)");
    cmd->add_option("--seed", flags.seed, "master seed override");
    cmd->add_option("--trials", flags.trials, "trial count override");
    cmd->add_option("--threads", flags.threads, "worker threads");
    return cmd;
  };
  auto* sweep_cmd = add_grid("sweep", "Monte Carlo sweep over the scenario grid");
  auto* outage_cmd = add_grid("outage", "outage-focused sweep (same engine)");
  auto* region_cmd =
      add_grid("region", "subcarrier-set region vs pairing comparison");
  auto* check_cmd = add_grid("oracle-check", "solver vs exhaustive oracle");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) {
      Scheme scheme = Scheme::Proposed;
      if (scheme_name_arg == "bm1") scheme = Scheme::BM1;
      else if (scheme_name_arg == "bm2") scheme = Scheme::BM2;
      else if (scheme_name_arg != "proposed") {
        throw std::runtime_error("unknown scheme: " + scheme_name_arg);
      }
      const ProblemInstance inst = load_instance(instance_path);
      const SolveOutcome outcome = run_scheme(inst, scheme, solve_opts);
      const std::string text = outcome_to_json(outcome).dump(2);
      if (solve_out.empty()) {
        std::cout << text << '\n';
      } else {
        std::ofstream out(solve_out);
        if (!out) throw std::runtime_error("cannot write " + solve_out);
        out << text << '\n';
      }
      return 0;
    }

    ScenarioConfig cfg = load_scenario(scenario_path);
    for (CLI::App* cmd : {sweep_cmd, outage_cmd, region_cmd, check_cmd}) {
      if (cmd->parsed()) apply_overrides(cfg, flags, cmd);
    }
    if (sweep_cmd->parsed() || outage_cmd->parsed()) {
      write_table(sweep(cfg), flags.out);
    } else if (region_cmd->parsed()) {
      write_table(region_comparison(cfg), flags.out);
    } else if (check_cmd->parsed()) {
      write_table(oracle_check(cfg), flags.out);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
