#include "birelay/io.hpp"

#include <fstream>

namespace birelay {

using nlohmann::json;

json instance_to_json(const ProblemInstance& inst) {
  json gains = json::object();
  for (int l = 0; l < kNumLinks; ++l) {
    gains[link_key(static_cast<Link>(l))] = inst.channels.gains[l];
  }
  return json{{"n", inst.n()},
              {"w", {inst.w_a, inst.w_b}},
              {"r", {inst.r_a, inst.r_b}},
              {"p", {inst.p_a, inst.p_b, inst.p_r}},
              {"gains", gains}};
}

ProblemInstance instance_from_json(const json& j) {
  ProblemInstance inst;
  inst.channels.n_subcarriers = j.at("n").get<int>();
  inst.w_a = j.at("w").at(0).get<double>();
  inst.w_b = j.at("w").at(1).get<double>();
  inst.r_a = j.at("r").at(0).get<double>();
  inst.r_b = j.at("r").at(1).get<double>();
  inst.p_a = j.at("p").at(0).get<double>();
  inst.p_b = j.at("p").at(1).get<double>();
  inst.p_r = j.at("p").at(2).get<double>();
  const auto& gains = j.at("gains");
  for (int l = 0; l < kNumLinks; ++l) {
    inst.channels.gains[l] =
        gains.at(link_key(static_cast<Link>(l))).get<std::vector<double>>();
  }
  validate_instance(inst);
  return inst;
}

ProblemInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  json j;
  in >> j;
  return instance_from_json(j);
}

void save_instance(const ProblemInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << instance_to_json(inst).dump(2) << '\n';
}

json outcome_to_json(const SolveOutcome& o) {
  json roles = json::array();
  json powers = json::array();
  for (const auto& d : o.allocation.decisions) {
    roles.push_back(role_name(d.role));
    if (d.role == Role::Tw1) {
      powers.push_back({d.power1, d.power2});
    } else {
      powers.push_back(d.power1);
    }
  }
  json per_mode = json::object();
  for (int u = 0; u < 2; ++u) {
    for (int m = 0; m < kNumModes; ++m) {
      const std::string key = std::string(u == 0 ? "a_" : "b_") +
                              mode_name(static_cast<Mode>(m));
      per_mode[key] = o.per_mode.rate[u][m];
    }
  }
  return json{{"rate_a", o.rate_a},
              {"rate_b", o.rate_b},
              {"objective", o.objective},
              {"per_mode", per_mode},
              {"outage", o.outage},
              {"iterations", o.iterations},
              {"converged", o.converged},
              {"dual_value", o.dual_value},
              {"gap_estimate", o.gap_estimate},
              {"diag_rate_a", o.diag_rate_a},
              {"diag_rate_b", o.diag_rate_b},
              {"diag_objective", o.diag_objective},
              {"node_power_used",
               {o.allocation.used(Node::A), o.allocation.used(Node::B),
                o.allocation.used(Node::R)}},
              {"roles", roles},
              {"powers", powers}};
}

ChannelConfig channel_config_from_json(const json& j) {
  ChannelConfig cfg;
  if (j.contains("n")) cfg.n_subcarriers = j.at("n").get<int>();
  double dist = 2.0;
  if (j.contains("distance_km")) dist = j.at("distance_km").get<double>();
  double relay_frac = 0.5;
  if (j.contains("relay_fraction")) {
    relay_frac = j.at("relay_fraction").get<double>();
  }
  cfg.geometry = {0.0, dist, relay_frac * dist};
  if (j.contains("pathloss_exponent")) {
    cfg.pathloss_exponent = j.at("pathloss_exponent").get<double>();
  }
  if (j.contains("taps")) {
    cfg.taps.clear();
    for (const auto& t : j.at("taps")) {
      cfg.taps.push_back(
          {t.at("delay").get<int>(), t.at("power_db").get<double>()});
    }
  }
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("reciprocal")) cfg.reciprocal = j.at("reciprocal").get<bool>();
  if (j.contains("shadowing_sigma_db")) {
    cfg.shadowing_sigma_db = j.at("shadowing_sigma_db").get<double>();
  }
  if (j.contains("rayleigh")) cfg.rayleigh_fading = j.at("rayleigh").get<bool>();
  validate_channel_config(cfg);
  return cfg;
}

json channel_config_to_json(const ChannelConfig& cfg) {
  json taps = json::array();
  for (const auto& t : cfg.taps) {
    taps.push_back({{"delay", t.delay_samples}, {"power_db", t.power_db}});
  }
  const double dist = cfg.geometry.dist_ab_km();
  return json{{"n", cfg.n_subcarriers},
              {"distance_km", dist},
              {"relay_fraction", cfg.geometry.dist_ar_km() / dist},
              {"pathloss_exponent", cfg.pathloss_exponent},
              {"taps", taps},
              {"seed", cfg.seed},
              {"reciprocal", cfg.reciprocal},
              {"shadowing_sigma_db", cfg.shadowing_sigma_db},
              {"rayleigh", cfg.rayleigh_fading}};
}

SolverOptions solver_options_from_json(const json& j) {
  SolverOptions opts;
  if (j.contains("stop_tol")) opts.stop_tol = j.at("stop_tol").get<double>();
  if (j.contains("iter_cap")) opts.iter_cap = j.at("iter_cap").get<int>();
  if (j.contains("alpha_min")) opts.alpha_min = j.at("alpha_min").get<double>();
  if (j.contains("mu_ceiling")) {
    opts.mu_ceiling = j.at("mu_ceiling").get<double>();
  }
  if (j.contains("mac_newton_tol")) {
    opts.mac_newton_tol = j.at("mac_newton_tol").get<double>();
  }
  if (j.contains("oracle_check")) {
    opts.oracle_check = j.at("oracle_check").get<bool>();
  }
  if (j.contains("parallel")) opts.parallel = j.at("parallel").get<bool>();
  if (j.contains("track_best_primal")) {
    opts.track_best_primal = j.at("track_best_primal").get<bool>();
  }
  return opts;
}

}  // namespace birelay
