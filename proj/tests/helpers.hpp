#pragma once

#include <random>

#include "birelay/channel.hpp"
#include "birelay/types.hpp"

namespace birelay::testing {

/// Instance with constant per-link gains (no fading), midpoint relay scale.
inline ProblemInstance flat_instance(int n, double g_direct, double g_user_relay,
                                     double g_relay_user, double budget,
                                     double r = 0.0, double w_a = 1.0,
                                     double w_b = 1.0) {
  ProblemInstance inst;
  inst.channels.n_subcarriers = n;
  inst.channels.link(Link::AB).assign(n, g_direct);
  inst.channels.link(Link::BA).assign(n, g_direct);
  inst.channels.link(Link::AR).assign(n, g_user_relay);
  inst.channels.link(Link::BR).assign(n, g_user_relay);
  inst.channels.link(Link::RA).assign(n, g_relay_user);
  inst.channels.link(Link::RB).assign(n, g_relay_user);
  inst.w_a = w_a;
  inst.w_b = w_b;
  inst.r_a = inst.r_b = r;
  inst.p_a = inst.p_b = inst.p_r = budget;
  return inst;
}

/// Fading instance from the default channel model at the standard geometry.
inline ProblemInstance seeded_instance(std::uint64_t seed, int n, double snr_db,
                                       double relay_frac = 0.5, double r_a = 0.0,
                                       double r_b = 0.0) {
  ChannelConfig cfg;
  cfg.n_subcarriers = n;
  cfg.geometry = {0.0, 2.0, 2.0 * relay_frac};
  cfg.seed = seed;
  while (static_cast<int>(cfg.taps.size()) > n) cfg.taps.pop_back();
  ProblemInstance inst;
  inst.channels = generate_channels(cfg);
  inst.r_a = r_a;
  inst.r_b = r_b;
  inst.p_a = inst.p_b = inst.p_r = std::pow(10.0, snr_db / 10.0);
  return inst;
}

}  // namespace birelay::testing
