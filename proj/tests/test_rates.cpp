#include <doctest.h>

#include <cmath>
#include <random>

#include "birelay/power_rules.hpp"
#include "birelay/rates.hpp"
#include "helpers.hpp"

using namespace birelay;

TEST_CASE("dominant sum constraint splits at the max-min point") {
  const auto [a, b] = best_region_split(2.0, 2.0, 3.0, 1.0, 1.0);
  CHECK(a + b == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(a == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(b == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("empty two-way mode yields zero rates") {
  const auto [a, b] = best_region_split(0.0, 0.0, 0.0, 1.0, 1.0);
  CHECK(a == 0.0);
  CHECK(b == 0.0);
}

TEST_CASE("region split matches a fine grid search on random caps") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 500; ++rep) {
    const double ca = u(rng) * 4.0;
    const double cb = u(rng) * 4.0;
    const double cs = u(rng) * 6.0;
    const double wa = u(rng) * 2.0;
    const double wb = u(rng) * 2.0;
    const auto [x, y] = best_region_split(ca, cb, cs, wa, wb);
    // Feasibility.
    CHECK(x >= 0.0);
    CHECK(y >= 0.0);
    CHECK(x <= ca + 1e-12);
    CHECK(y <= cb + 1e-12);
    CHECK(x + y <= cs + 1e-12);
    // Value vs grid.
    double best = 0.0;
    const int g = 400;
    for (int i = 0; i <= g; ++i) {
      const double gx = ca * i / g;
      const double rem = std::min(cb, cs - gx);
      if (gx > cs) break;
      if (rem >= 0.0) best = std::max(best, wa * gx + wb * rem);
      best = std::max(best, wa * gx);
    }
    CHECK(wa * x + wb * y >= best - 1e-6 * (1.0 + best));
  }
}

TEST_CASE("rate caps account each role to the correct link") {
  // Distinct gains per link expose any link mix-up.
  ProblemInstance inst = birelay::testing::flat_instance(7, 1.0, 1.0, 1.0, 10.0);
  inst.channels.link(Link::AB).assign(7, 1.0);
  inst.channels.link(Link::BA).assign(7, 2.0);
  inst.channels.link(Link::AR).assign(7, 3.0);
  inst.channels.link(Link::BR).assign(7, 4.0);
  inst.channels.link(Link::RA).assign(7, 5.0);
  inst.channels.link(Link::RB).assign(7, 6.0);

  std::vector<SubcarrierDecision> ds = {
      {Role::DtA, 1.0, 0.0}, {Role::DtB, 1.0, 0.0},  {Role::Ow1A, 1.0, 0.0},
      {Role::Ow1B, 1.0, 0.0}, {Role::Ow2A, 1.0, 0.0}, {Role::Ow2B, 1.0, 0.0},
      {Role::Tw1, 1.0, 2.0}};
  const Allocation alloc = make_allocation(ds);
  const RateCaps caps = compute_rate_caps(alloc, inst);

  CHECK(caps.direct[0] == doctest::Approx(cap_rate(1.0)));
  CHECK(caps.direct[1] == doctest::Approx(cap_rate(2.0)));
  CHECK(caps.ow_hop1[0] == doctest::Approx(cap_rate(3.0)));
  CHECK(caps.ow_hop1[1] == doctest::Approx(cap_rate(4.0)));
  // A's traffic is forwarded on R->B, B's on R->A.
  CHECK(caps.ow_hop2[0] == doctest::Approx(cap_rate(6.0)));
  CHECK(caps.ow_hop2[1] == doctest::Approx(cap_rate(5.0)));
  CHECK(caps.tw_a1 == doctest::Approx(cap_rate(3.0)));
  CHECK(caps.tw_b1 == doctest::Approx(cap_rate(8.0)));
  CHECK(caps.tw_sum1 == doctest::Approx(cap_rate(11.0)));
  CHECK(caps.tw_a2 == 0.0);
  CHECK(caps.tw_b2 == 0.0);
}

TEST_CASE("one-way end-to-end rate is the minimum of the hop sums") {
  ProblemInstance inst = birelay::testing::flat_instance(4, 0.5, 2.0, 0.25, 10.0);
  std::vector<SubcarrierDecision> ds = {{Role::Ow1A, 1.0, 0.0},
                                        {Role::Ow1A, 1.0, 0.0},
                                        {Role::Ow2A, 1.0, 0.0},
                                        {Role::Idle, 0.0, 0.0}};
  const PerModeRates rates = evaluate_rates(make_allocation(ds), inst, 1.0, 1.0);
  const double hop1 = 2.0 * cap_rate(2.0);
  const double hop2 = cap_rate(0.25);
  CHECK(rates.rate[0][static_cast<int>(Mode::OneWay)] ==
        doctest::Approx(std::min(hop1, hop2)));
  CHECK(rates.rate[1][static_cast<int>(Mode::OneWay)] == 0.0);
  CHECK(rates.user_total(Node::B) == 0.0);
}

TEST_CASE("no TW subcarriers means zero two-way rates") {
  ProblemInstance inst = birelay::testing::flat_instance(2, 0.5, 1.0, 1.0, 5.0);
  std::vector<SubcarrierDecision> ds = {{Role::Tw1, 1.0, 1.0},
                                        {Role::Idle, 0.0, 0.0}};
  const PerModeRates rates = evaluate_rates(make_allocation(ds), inst, 1.0, 1.0);
  // MAC subcarriers without a BC phase cap the region at zero.
  CHECK(rates.rate[0][static_cast<int>(Mode::TwoWay)] == 0.0);
  CHECK(rates.rate[1][static_cast<int>(Mode::TwoWay)] == 0.0);
}
