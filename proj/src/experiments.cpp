#include "birelay/experiments.hpp"

#include <omp.h>

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>

#include "birelay/oracle.hpp"

namespace birelay {

using nlohmann::json;

void validate_scenario(const ScenarioConfig& cfg) {
  if (cfg.n_trials < 1) throw InvalidConfig("n_trials must be >= 1");
  if (cfg.schemes.empty()) throw InvalidConfig("no schemes selected");
  if (cfg.snr_db.empty()) throw InvalidConfig("empty SNR grid");
  for (double s : cfg.snr_db) {
    if (!std::isfinite(s)) throw InvalidConfig("non-finite SNR");
  }
  if (cfg.relay_positions.empty()) throw InvalidConfig("no relay positions");
  for (double f : cfg.relay_positions) {
    if (!(f > 0.0 && f < 1.0)) {
      throw InvalidConfig("relay positions must lie in (0, 1)");
    }
  }
  if (cfg.qos_points.empty()) throw InvalidConfig("no QoS points");
  for (const auto& q : cfg.qos_points) {
    if (!(q[0] >= 0.0 && q[1] >= 0.0)) throw InvalidConfig("negative QoS");
  }
  validate_channel_config(cfg.channel);
}

ScenarioConfig scenario_from_json(const json& j) {
  ScenarioConfig cfg;
  if (j.contains("schemes")) {
    cfg.schemes.clear();
    for (const auto& s : j.at("schemes")) {
      const std::string name = s.get<std::string>();
      if (name == "proposed") cfg.schemes.push_back(Scheme::Proposed);
      else if (name == "bm1") cfg.schemes.push_back(Scheme::BM1);
      else if (name == "bm2") cfg.schemes.push_back(Scheme::BM2);
      else throw InvalidConfig("unknown scheme: " + name);
    }
  }
  if (j.contains("snr_db")) cfg.snr_db = j.at("snr_db").get<std::vector<double>>();
  if (j.contains("trials")) cfg.n_trials = j.at("trials").get<int>();
  if (j.contains("relay_positions")) {
    cfg.relay_positions = j.at("relay_positions").get<std::vector<double>>();
  }
  if (j.contains("weights")) {
    cfg.w_a = j.at("weights").at(0).get<double>();
    cfg.w_b = j.at("weights").at(1).get<double>();
  }
  if (j.contains("qos")) {
    const auto& q = j.at("qos");
    cfg.qos_points.clear();
    if (q.is_array()) {
      for (const auto& p : q) {
        cfg.qos_points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      }
    } else if (q.contains("ratios")) {
      const double sum = q.at("sum").get<double>();
      for (const auto& r : q.at("ratios")) {
        const double f = r.get<double>();
        cfg.qos_points.push_back({sum * f, sum * (1.0 - f)});
      }
    } else {
      cfg.qos_points.push_back(
          {q.at("ra").get<double>(), q.at("rb").get<double>()});
    }
  }
  if (j.contains("channel")) {
    cfg.channel = [&]() {
      ChannelConfig c;
      const auto& cj = j.at("channel");
      if (cj.contains("n")) c.n_subcarriers = cj.at("n").get<int>();
      double dist = 2.0;
      if (cj.contains("distance_km")) dist = cj.at("distance_km").get<double>();
      c.geometry = {0.0, dist, 0.5 * dist};
      if (cj.contains("pathloss_exponent")) {
        c.pathloss_exponent = cj.at("pathloss_exponent").get<double>();
      }
      if (cj.contains("taps")) {
        c.taps.clear();
        for (const auto& t : cj.at("taps")) {
          c.taps.push_back(
              {t.at("delay").get<int>(), t.at("power_db").get<double>()});
        }
      }
      if (cj.contains("reciprocal")) c.reciprocal = cj.at("reciprocal").get<bool>();
      if (cj.contains("shadowing_sigma_db")) {
        c.shadowing_sigma_db = cj.at("shadowing_sigma_db").get<double>();
      }
      if (cj.contains("rayleigh")) c.rayleigh_fading = cj.at("rayleigh").get<bool>();
      return c;
    }();
  }
  if (j.contains("seed")) cfg.master_seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("solver")) {
    const auto& sj = j.at("solver");
    if (sj.contains("stop_tol")) cfg.solver.stop_tol = sj.at("stop_tol").get<double>();
    if (sj.contains("iter_cap")) cfg.solver.iter_cap = sj.at("iter_cap").get<int>();
    if (sj.contains("alpha_min")) cfg.solver.alpha_min = sj.at("alpha_min").get<double>();
    if (sj.contains("mu_ceiling")) cfg.solver.mu_ceiling = sj.at("mu_ceiling").get<double>();
    if (sj.contains("mac_newton_tol")) {
      cfg.solver.mac_newton_tol = sj.at("mac_newton_tol").get<double>();
    }
    if (sj.contains("oracle_check")) cfg.solver.oracle_check = sj.at("oracle_check").get<bool>();
    if (sj.contains("parallel")) cfg.solver.parallel = sj.at("parallel").get<bool>();
  }
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  validate_scenario(cfg);
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  json j;
  in >> j;
  return scenario_from_json(j);
}

std::string csv_to_string(const ResultTable& table) {
  std::string out;
  for (size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  char buf[40];
  for (const auto& row : table.rows) {
    out += row.scheme;
    for (double v : row.values) {
      std::snprintf(buf, sizeof(buf), "%.9g", v);
      out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void emit_csv(const ResultTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << csv_to_string(table);
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::uint64_t trial_seed(std::uint64_t master, double snr_db, double relay_pos,
                         double r_a, double r_b, int trial) {
  std::uint64_t h = mix64(master);
  h = hash_combine(h, std::bit_cast<std::uint64_t>(snr_db));
  h = hash_combine(h, std::bit_cast<std::uint64_t>(relay_pos));
  h = hash_combine(h, std::bit_cast<std::uint64_t>(r_a));
  h = hash_combine(h, std::bit_cast<std::uint64_t>(r_b));
  h = hash_combine(h, static_cast<std::uint64_t>(trial));
  return h;
}

ProblemInstance make_trial_instance(const ScenarioConfig& cfg, double snr_db,
                                    double relay_pos, double r_a, double r_b,
                                    int trial) {
  ChannelConfig ch = cfg.channel;
  const double dist = ch.geometry.dist_ab_km();
  ch.geometry = {0.0, dist, relay_pos * dist};
  ch.seed = trial_seed(cfg.master_seed, snr_db, relay_pos, r_a, r_b, trial);

  ProblemInstance inst;
  inst.channels = generate_channels(ch);
  inst.w_a = cfg.w_a;
  inst.w_b = cfg.w_b;
  inst.r_a = r_a;
  inst.r_b = r_b;
  // SNR is the average per-subcarrier transmit SNR (unit noise), so the
  // per-node budget scales with the subcarrier count.
  const double budget = cfg.channel.n_subcarriers * std::pow(10.0, snr_db / 10.0);
  inst.p_a = inst.p_b = inst.p_r = budget;
  return inst;
}

SolveOutcome run_scheme(const ProblemInstance& inst, Scheme scheme,
                        const SolverOptions& opts) {
  return solve(inst, opts, scheme_mask(scheme));
}

namespace {

struct TrialStats {
  double sum_rate = 0.0;  // zeroed on outage
  double rate_a = 0.0, rate_b = 0.0;
  bool outage = false;
  std::array<double, 6> per_mode{};  // a_dt, a_ow, a_tw, b_dt, b_ow, b_tw
  std::array<int, 4> occupancy{};    // dt, ow, tw, idle counts
  bool converged = false;
  int iterations = 0;
  double dual = 0.0;
  double gap = 0.0;
};

TrialStats stats_from_outcome(const SolveOutcome& o) {
  TrialStats s;
  s.rate_a = o.rate_a;
  s.rate_b = o.rate_b;
  s.sum_rate = o.rate_a + o.rate_b;
  s.outage = o.outage;
  for (int u = 0; u < 2; ++u) {
    for (int m = 0; m < kNumModes; ++m) {
      s.per_mode[u * kNumModes + m] = o.per_mode.rate[u][m];
    }
  }
  for (const auto& d : o.allocation.decisions) {
    switch (d.role) {
      case Role::DtA:
      case Role::DtB:
        ++s.occupancy[0];
        break;
      case Role::Ow1A:
      case Role::Ow1B:
      case Role::Ow2A:
      case Role::Ow2B:
        ++s.occupancy[1];
        break;
      case Role::Tw1:
      case Role::Tw2:
        ++s.occupancy[2];
        break;
      case Role::Idle:
        ++s.occupancy[3];
        break;
    }
  }
  s.converged = o.converged;
  s.iterations = o.iterations;
  s.dual = o.dual_value;
  s.gap = o.gap_estimate;
  return s;
}

struct Cell {
  double snr_db, relay_pos, r_a, r_b;
};

}  // namespace

ResultTable sweep(const ScenarioConfig& cfg, const SweepObserver& observer) {
  validate_scenario(cfg);
  std::vector<Cell> cells;
  for (double snr : cfg.snr_db) {
    for (double pos : cfg.relay_positions) {
      for (const auto& q : cfg.qos_points) {
        cells.push_back({snr, pos, q[0], q[1]});
      }
    }
  }
  const int n_cells = static_cast<int>(cells.size());
  const int n_schemes = static_cast<int>(cfg.schemes.size());
  const int jobs = n_cells * cfg.n_trials;

  SolverOptions opts = cfg.solver;
  opts.parallel = false;  // trials parallelize; keep the kernel serial

  std::vector<TrialStats> stats(static_cast<size_t>(jobs) * n_schemes);
  const int nt = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(nt)
  for (int job = 0; job < jobs; ++job) {
    const Cell& cell = cells[job / cfg.n_trials];
    const int trial = job % cfg.n_trials;
    const ProblemInstance inst = make_trial_instance(
        cfg, cell.snr_db, cell.relay_pos, cell.r_a, cell.r_b, trial);
    for (int s = 0; s < n_schemes; ++s) {
      const SolveOutcome out = run_scheme(inst, cfg.schemes[s], opts);
      if (observer) observer(inst, cfg.schemes[s], out);
      stats[static_cast<size_t>(job) * n_schemes + s] = stats_from_outcome(out);
    }
  }

  ResultTable table;
  table.columns = {
      "scheme",       "snr_db",    "relay_pos", "r_a",
      "r_b",          "trials",    "mean_sum_rate", "mean_sum_rate_nonoutage",
      "outage_frac",  "mean_rate_a", "mean_rate_b",
      "rate_a_dt",    "rate_a_ow", "rate_a_tw", "rate_b_dt",
      "rate_b_ow",    "rate_b_tw", "occ_dt",    "occ_ow",
      "occ_tw",       "occ_idle",  "share_dt",  "share_ow",
      "share_tw",     "converged_frac", "mean_iterations", "mean_dual",
      "mean_gap"};

  for (int ci = 0; ci < n_cells; ++ci) {
    for (int s = 0; s < n_schemes; ++s) {
      double sum = 0, sum_no = 0, ra = 0, rb = 0;
      int outages = 0, nonout = 0, converged = 0;
      std::array<double, 6> pm{};
      std::array<double, 4> occ{};
      std::array<double, 3> share{};
      int share_trials = 0;
      double iters = 0, dual = 0, gap = 0;
      for (int trial = 0; trial < cfg.n_trials; ++trial) {
        const auto& st =
            stats[(static_cast<size_t>(ci) * cfg.n_trials + trial) * n_schemes + s];
        sum += st.sum_rate;
        ra += st.rate_a;
        rb += st.rate_b;
        if (st.outage) {
          ++outages;
        } else {
          ++nonout;
          sum_no += st.sum_rate;
          for (int k = 0; k < 6; ++k) pm[k] += st.per_mode[k];
          if (st.sum_rate > 0.0) {
            ++share_trials;
            for (int m = 0; m < 3; ++m) {
              share[m] +=
                  (st.per_mode[m] + st.per_mode[3 + m]) / st.sum_rate;
            }
          }
        }
        for (int k = 0; k < 4; ++k) occ[k] += st.occupancy[k];
        if (st.converged) ++converged;
        iters += st.iterations;
        dual += st.dual;
        gap += st.gap;
      }
      const double nt_d = cfg.n_trials;
      const auto mean_no = [&](double x) { return nonout ? x / nonout : 0.0; };
      ResultTable::Row row;
      row.scheme = scheme_name(cfg.schemes[s]);
      const Cell& cell = cells[ci];
      row.values = {cell.snr_db,
                    cell.relay_pos,
                    cell.r_a,
                    cell.r_b,
                    nt_d,
                    sum / nt_d,
                    mean_no(sum_no),
                    outages / nt_d,
                    ra / nt_d,
                    rb / nt_d,
                    mean_no(pm[0]),
                    mean_no(pm[1]),
                    mean_no(pm[2]),
                    mean_no(pm[3]),
                    mean_no(pm[4]),
                    mean_no(pm[5]),
                    occ[0] / nt_d,
                    occ[1] / nt_d,
                    occ[2] / nt_d,
                    occ[3] / nt_d,
                    share_trials ? share[0] / share_trials : 0.0,
                    share_trials ? share[1] / share_trials : 0.0,
                    share_trials ? share[2] / share_trials : 0.0,
                    converged / nt_d,
                    iters / nt_d,
                    dual / nt_d,
                    gap / nt_d};
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

ResultTable region_comparison(const ScenarioConfig& cfg) {
  validate_scenario(cfg);
  ResultTable table;
  table.columns = {"scheme", "snr_db", "trial", "set_basis_sum_rate",
                   "pairing_sum_rate"};
  const double pos = cfg.relay_positions.front();
  const int nt = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();

  for (double snr : cfg.snr_db) {
    std::vector<std::array<double, 2>> vals(cfg.n_trials);
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (int trial = 0; trial < cfg.n_trials; ++trial) {
      const ProblemInstance inst =
          make_trial_instance(cfg, snr, pos, 0.0, 0.0, trial);
      vals[trial] = {best_set_basis(inst).sum_rate, pairing_baseline(inst)};
    }
    for (int trial = 0; trial < cfg.n_trials; ++trial) {
      table.rows.push_back({"region",
                            {snr, static_cast<double>(trial), vals[trial][0],
                             vals[trial][1]}});
    }
  }
  return table;
}

ResultTable oracle_check(const ScenarioConfig& cfg) {
  validate_scenario(cfg);
  ResultTable table;
  table.columns = {"scheme", "snr_db",     "trial",
                   "solver_primal", "solver_dual", "oracle_objective"};
  const double pos = cfg.relay_positions.front();
  const auto q = cfg.qos_points.front();
  const int nt = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();

  for (double snr : cfg.snr_db) {
    std::vector<std::array<double, 3>> vals(cfg.n_trials);
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (int trial = 0; trial < cfg.n_trials; ++trial) {
      const ProblemInstance inst =
          make_trial_instance(cfg, snr, pos, q[0], q[1], trial);
      SolverOptions opts = cfg.solver;
      opts.parallel = false;
      const SolveOutcome out = solve(inst, opts);
      const ExhaustiveResult ex =
          exhaustive_solve(inst, OracleOptions{}, /*parallel=*/false);
      vals[trial] = {out.diag_objective, out.dual_value, ex.objective};
    }
    for (int trial = 0; trial < cfg.n_trials; ++trial) {
      table.rows.push_back({"check",
                            {snr, static_cast<double>(trial), vals[trial][0],
                             vals[trial][1], vals[trial][2]}});
    }
  }
  return table;
}

}  // namespace birelay
