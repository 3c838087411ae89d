#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "birelay/power_rules.hpp"

using namespace birelay;

namespace {

// Independent 1-D concave maximizer over p >= 0: bracket by doubling, then
// golden-section to width `tol`.
double golden_max(const std::function<double(double)>& f, double tol = 1e-9) {
  double hi = 1.0;
  for (int i = 0; i < 200 && f(hi * 2.0) > f(hi); ++i) hi *= 2.0;
  hi *= 2.0;
  double lo = 0.0;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > tol * (1.0 + hi)) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = f(x1);
    }
  }
  const double mid = 0.5 * (lo + hi);
  return f(mid) >= f(0.0) ? mid : 0.0;
}

// Independent 2-D maximizer over the nonnegative quadrant by iterated grid
// refinement.
std::pair<double, double> grid_max_2d(
    const std::function<double(double, double)>& f, double hi_a, double hi_b,
    int rounds = 6, int pts = 33) {
  double lo_a = 0.0, lo_b = 0.0;
  double best_a = 0.0, best_b = 0.0;
  for (int round = 0; round < rounds; ++round) {
    double best = -1e300;
    const double da = (hi_a - lo_a) / (pts - 1);
    const double db = (hi_b - lo_b) / (pts - 1);
    for (int i = 0; i < pts; ++i) {
      for (int j = 0; j < pts; ++j) {
        const double a = lo_a + da * i, b = lo_b + db * j;
        const double v = f(a, b);
        if (v > best) {
          best = v;
          best_a = a;
          best_b = b;
        }
      }
    }
    lo_a = std::max(0.0, best_a - 2.0 * da);
    hi_a = best_a + 2.0 * da;
    lo_b = std::max(0.0, best_b - 2.0 * db);
    hi_b = best_b + 2.0 * db;
  }
  return {best_a, best_b};
}

constexpr double kS = kSigma;

}  // namespace

TEST_CASE("water-filling closed form substitutions") {
  CHECK(waterfill_direct(2.0 * kS, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(waterfill_direct(kS, 1.0, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(waterfill_direct(1.0, 0.5, 0.1) == 0.0);  // level 2.885 below floor 10
  CHECK(waterfill_oneway_hop1(0.0, 1.0, 5.0) == 0.0);
  CHECK(waterfill_oneway_hop2(kS, 0.5, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(waterfill_oneway_hop2(0.0, 0.5, 1.0) == 0.0);
  CHECK(waterfill_direct(1.0, 1.0, 0.0) == 0.0);
  CHECK_THROWS_AS(waterfill_direct(1.0, 0.0, 1.0), NonPositivePrice);
  CHECK_THROWS_AS(waterfill_direct(1.0, -2.0, 1.0), NonPositivePrice);
}

TEST_CASE("water-filling matches the 1-D concave oracle on a random grid") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 2000; ++rep) {
    const double level = u(rng) * 4.0;
    const double price = 0.05 + u(rng) * 4.0;
    const double gain = u(rng) < 0.1 ? 0.0 : std::pow(10.0, -3.0 + 4.0 * u(rng));
    const double p = waterfill_power(level, price, gain);
    const double ref = golden_max([&](double x) {
      return level * cap_rate(x * gain) - price * x;
    });
    CHECK(std::fabs(p - ref) < 1e-6 * (1.0 + ref));
  }
}

TEST_CASE("MAC powers: decoupled substitution") {
  const MacPowers p = solve_mac_powers(2.0 * kS, 2.0 * kS, 0.0, 1.0, 1.0, 1.0, 1.0);
  CHECK(p.p_a == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(p.p_b == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("MAC powers: zero multipliers give zero powers") {
  const MacPowers p = solve_mac_powers(0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 2.0);
  CHECK(p.p_a == 0.0);
  CHECK(p.p_b == 0.0);
}

TEST_CASE("MAC powers match the 2-D grid oracle") {
  const double la = kS, lb = kS, lab = kS;
  const MacPowers p = solve_mac_powers(la, lb, lab, 1.0, 1.0, 1.0, 2.0);
  const auto [ra, rb] = grid_max_2d(
      [&](double a, double b) {
        return mac_profit(la, lb, lab, 1.0, 1.0, 1.0, 2.0, a, b);
      },
      10.0, 10.0);
  CHECK(std::fabs(p.p_a - ra) < 1e-4);
  CHECK(std::fabs(p.p_b - rb) < 1e-4);
  CHECK(mac_kkt_residual(la, lb, lab, 1.0, 1.0, 1.0, 2.0, p.p_a, p.p_b) < 1e-10);
}

TEST_CASE("MAC powers on random draws: oracle agreement and KKT residual") {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 300; ++rep) {
    const double la = u(rng) * 2.0;
    const double lb = u(rng) * 2.0;
    const double lab = u(rng) * 2.0;
    const double aa = 0.2 + u(rng) * 2.0;
    const double ab = 0.2 + u(rng) * 2.0;
    const double ga = std::pow(10.0, -1.5 + 2.5 * u(rng));
    const double gb = std::pow(10.0, -1.5 + 2.5 * u(rng));
    const MacPowers p = solve_mac_powers(la, lb, lab, aa, ab, ga, gb);
    CHECK(mac_kkt_residual(la, lb, lab, aa, ab, ga, gb, p.p_a, p.p_b) < 1e-10);

    const double hi_a = 2.0 * (la + lab) / (kS * aa) + 2.0;
    const double hi_b = 2.0 * (lb + lab) / (kS * ab) + 2.0;
    const auto [ra, rb] = grid_max_2d(
        [&](double a, double b) {
          return mac_profit(la, lb, lab, aa, ab, ga, gb, a, b);
        },
        hi_a, hi_b);
    const double v_solver = mac_profit(la, lb, lab, aa, ab, ga, gb, p.p_a, p.p_b);
    const double v_grid = mac_profit(la, lb, lab, aa, ab, ga, gb, ra, rb);
    // Profit at the solver point must dominate the grid optimum.
    CHECK(v_solver >= v_grid - 1e-9 * (1.0 + std::fabs(v_grid)));
  }
}

TEST_CASE("MAC degenerate split: only the weighted sum is pinned") {
  // lam_c1 = 0 on both users with lam_AB > 0: the optimum puts everything
  // on the cheaper coordinate; ties go to A by the fixed candidate order.
  const MacPowers cheap_b =
      solve_mac_powers(0.0, 0.0, 2.0 * kS, 1.0, 0.5, 1.0, 1.0);
  CHECK(cheap_b.p_a == 0.0);
  CHECK(cheap_b.p_b == doctest::Approx(3.0).epsilon(1e-10));

  const MacPowers tie = solve_mac_powers(0.0, 0.0, 2.0 * kS, 1.0, 1.0, 1.0, 1.0);
  CHECK(tie.p_a == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(tie.p_b == 0.0);
}

TEST_CASE("BC power closed form") {
  CHECK(bc_power(kS, kS, 1.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bc_power(kS, kS, 10.0, 1.0, 1.0) == 0.0);  // threshold branch: 10 >= 2
  CHECK(bc_power(0.0, 0.0, 1.0, 1.0, 1.0) == 0.0);
  CHECK_THROWS_AS(bc_power(1.0, 1.0, 0.0, 1.0, 1.0), NonPositivePrice);
}

TEST_CASE("BC power matches the 1-D concave oracle on a random grid") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 2000; ++rep) {
    const double xa = u(rng) * 3.0;
    const double xb = u(rng) * 3.0;
    const double ar = 0.05 + u(rng) * 3.0;
    const double gra = u(rng) < 0.08 ? 0.0 : std::pow(10.0, -2.0 + 3.0 * u(rng));
    const double grb = u(rng) < 0.08 ? 0.0 : std::pow(10.0, -2.0 + 3.0 * u(rng));
    const double p = bc_power(xa, xb, ar, gra, grb);
    const double ref = golden_max([&](double x) {
      return bc_profit(xa, xb, ar, gra, grb, x);
    });
    CHECK(std::fabs(p - ref) < 1e-6 * (1.0 + ref));
  }
}
