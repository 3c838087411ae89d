#include <doctest.h>

#include <cmath>
#include <random>

#include "birelay/power_rules.hpp"
#include "birelay/profits.hpp"
#include "helpers.hpp"

using namespace birelay;
using birelay::testing::flat_instance;

namespace {

DualPoint uniform_dual(double w_a, double w_b) {
  DualPoint d;
  d.w_a = w_a;
  d.w_b = w_b;
  d.lam_b1 = {w_a / 2.0, w_b / 2.0};
  d.lam_c1 = {w_a / 3.0, w_b / 3.0};
  d.lam_ab_c = std::min(w_a, w_b) / 3.0;
  d.alpha = {1.0, 1.0, 1.0};
  return d;
}

}  // namespace

TEST_CASE("priced-out regime zeroes all profits and idles the subcarrier") {
  const ProblemInstance inst = flat_instance(4, 1.0, 1.0, 1.0, 10.0);
  DualPoint d = uniform_dual(1.0, 1.0);
  d.alpha = {1e6, 1e6, 1e6};
  const SubcarrierProfits sp =
      compute_profits(0, d, inst, scheme_mask(Scheme::Proposed));
  for (double h : sp.profits.value) CHECK(h == 0.0);
  CHECK(assign_subcarrier(sp.profits) == Role::Idle);
}

TEST_CASE("single active direct term reproduces the closed-form profit") {
  // Only the A->B link carries gain; w_A + mu_A = 2 sigma prices DT-A at
  // profit 2*sigma - 1, everything else at zero.
  ProblemInstance inst = flat_instance(2, 0.0, 0.0, 0.0, 10.0);
  inst.channels.link(Link::AB).assign(2, 1.0);
  inst.w_a = 2.0 * kSigma;
  inst.w_b = 0.0;
  DualPoint d;
  d.w_a = inst.w_a;
  d.w_b = 0.0;
  d.alpha = {1.0, 1.0, 1.0};
  const SubcarrierProfits sp =
      compute_profits(0, d, inst, scheme_mask(Scheme::Proposed));
  CHECK(sp.profits.value[static_cast<int>(Role::DtA)] ==
        doctest::Approx(2.0 * kSigma - 1.0).epsilon(1e-12));
  for (int r = 1; r < kNumActiveRoles; ++r) CHECK(sp.profits.value[r] == 0.0);
  CHECK(assign_subcarrier(sp.profits) == Role::DtA);
}

TEST_CASE("argmax with tie-breaking toward the lowest role index") {
  ProfitVector p;
  p.value = {0.5, 0.1, 0.0, 0.0, 0.0, 0.0, 0.4, 0.0};
  CHECK(assign_subcarrier(p) == Role::DtA);
  p.value = {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  CHECK(assign_subcarrier(p) == Role::Idle);
  p.value = {0.7, 0.7, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  CHECK(assign_subcarrier(p) == Role::DtA);
  p.value = {0.0, 0.0, 0.2, 0.0, 0.0, 0.0, 0.2, 0.2};
  CHECK(assign_subcarrier(p) == Role::Ow1A);
}

TEST_CASE("one-way second hop prices the forward link, not the return") {
  // g_RB = 1 vs g_RA = 0.25: OW2-A (A's traffic, delivered to B) must use
  // g_RB. The wrong link would put the water level below the floor.
  ProblemInstance inst = flat_instance(1, 0.0, 0.0, 0.0, 10.0);
  inst.channels.link(Link::RB).assign(1, 1.0);
  inst.channels.link(Link::RA).assign(1, 0.25);
  inst.w_a = kSigma;
  inst.w_b = 0.0;
  DualPoint d;
  d.w_a = kSigma;
  d.w_b = 0.0;
  d.alpha = {1.0, 1.0, 0.5};
  const SubcarrierProfits sp =
      compute_profits(0, d, inst, scheme_mask(Scheme::Proposed));
  CHECK(sp.profits.value[static_cast<int>(Role::Ow2A)] ==
        doctest::Approx(kSigma - 0.5).epsilon(1e-12));
  CHECK(sp.profits.value[static_cast<int>(Role::Ow2B)] == 0.0);
}

TEST_CASE("profit optimality dominates any grid power") {
  std::mt19937_64 rng(6021);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const ProblemInstance inst = birelay::testing::seeded_instance(17, 8, 20.0);
  for (int rep = 0; rep < 50; ++rep) {
    DualPoint d;
    d.mu = {u(rng), u(rng)};
    d.lam_b1 = {(1.0 + d.mu[0]) * u(rng), (1.0 + d.mu[1]) * u(rng)};
    const double ca = (1.0 + d.mu[0]) * u(rng);
    const double cb = (1.0 + d.mu[1]) * u(rng);
    d.lam_c1 = {ca, cb};
    d.lam_ab_c = std::min(1.0 + d.mu[0] - ca, 1.0 + d.mu[1] - cb) * u(rng);
    d.alpha = {0.1 + u(rng), 0.1 + u(rng), 0.1 + u(rng)};
    validate_dual(d);
    const int n = static_cast<int>(u(rng) * 8);
    const SubcarrierProfits sp =
        compute_profits(n, d, inst, scheme_mask(Scheme::Proposed));
    const auto& ch = inst.channels;
    for (int gi = 0; gi <= 24; ++gi) {
      const double p = gi * 0.5;
      const double tol = 1e-9;
      CHECK(sp.profits.value[0] + tol >=
            d.level(Node::A) * cap_rate(p * ch.gain(Link::AB, n)) -
                d.alpha[0] * p);
      CHECK(sp.profits.value[2] + tol >=
            d.lam_b1[0] * cap_rate(p * ch.gain(Link::AR, n)) - d.alpha[0] * p);
      CHECK(sp.profits.value[4] + tol >=
            d.lam_b2(Node::A) * cap_rate(p * ch.gain(Link::RB, n)) -
                d.alpha[2] * p);
      CHECK(sp.profits.value[7] + tol >=
            bc_profit(d.xi(Node::A), d.xi(Node::B), d.alpha[2],
                      ch.gain(Link::RA, n), ch.gain(Link::RB, n), p));
      for (int gj = 0; gj <= 12; ++gj) {
        CHECK(sp.profits.value[6] + tol >=
              mac_profit(d.lam_c1[0], d.lam_c1[1], d.lam_ab_c, d.alpha[0],
                         d.alpha[1], ch.gain(Link::AR, n), ch.gain(Link::BR, n),
                         p, gj * 0.5));
      }
    }
  }
}

TEST_CASE("scheme masks restrict roles and dual dimensions") {
  const SchemeMask bm1 = scheme_mask(Scheme::BM1);
  CHECK(bm1.active_duals.size() == 4);
  CHECK_FALSE(bm1.relay_active);
  const SchemeMask bm2 = scheme_mask(Scheme::BM2);
  CHECK(bm2.active_duals.size() == 7);
  const SchemeMask full = scheme_mask(Scheme::Proposed);
  CHECK(full.active_duals.size() == 10);

  const ProblemInstance inst = flat_instance(4, 1.0, 4.0, 4.0, 10.0);
  const DualPoint d = uniform_dual(1.0, 1.0);
  const SubcarrierProfits sp = compute_profits(0, d, inst, bm1);
  for (int r = 2; r < kNumActiveRoles; ++r) {
    CHECK(sp.profits.value[r] == -std::numeric_limits<double>::infinity());
  }
  CHECK(assign_subcarrier(sp.profits) != Role::Idle);
}

TEST_CASE("inner maximization is identical in serial and parallel") {
  const ProblemInstance inst = birelay::testing::seeded_instance(3, 128, 20.0);
  const DualPoint d = uniform_dual(1.0, 1.0);
  const InnerResult serial =
      inner_maximize(inst, d, scheme_mask(Scheme::Proposed), false);
  const InnerResult parallel =
      inner_maximize(inst, d, scheme_mask(Scheme::Proposed), true);
  CHECK(serial.dual_value == parallel.dual_value);
  CHECK(serial.subgradient == parallel.subgradient);
  CHECK(serial.consumed == parallel.consumed);
  REQUIRE(serial.decisions.size() == parallel.decisions.size());
  for (size_t i = 0; i < serial.decisions.size(); ++i) {
    CHECK(serial.decisions[i].role == parallel.decisions[i].role);
    CHECK(serial.decisions[i].power1 == parallel.decisions[i].power1);
    CHECK(serial.decisions[i].power2 == parallel.decisions[i].power2);
  }
}

TEST_CASE("common weight scaling leaves the argmax pattern invariant") {
  const ProblemInstance inst = birelay::testing::seeded_instance(9, 32, 15.0);
  DualPoint d = uniform_dual(1.0, 1.5);
  d.mu = {0.2, 0.1};
  const double c = 3.7;
  DualPoint scaled;
  scaled.w_a = c * d.w_a;
  scaled.w_b = c * d.w_b;
  scaled.mu = {c * d.mu[0], c * d.mu[1]};
  scaled.lam_b1 = {c * d.lam_b1[0], c * d.lam_b1[1]};
  scaled.lam_c1 = {c * d.lam_c1[0], c * d.lam_c1[1]};
  scaled.lam_ab_c = c * d.lam_ab_c;
  scaled.alpha = {c * d.alpha[0], c * d.alpha[1], c * d.alpha[2]};
  for (int n = 0; n < 32; ++n) {
    const auto a = compute_profits(n, d, inst, scheme_mask(Scheme::Proposed));
    const auto b =
        compute_profits(n, scaled, inst, scheme_mask(Scheme::Proposed));
    CHECK(assign_subcarrier(a.profits) == assign_subcarrier(b.profits));
  }
}
