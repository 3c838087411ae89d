#include "birelay/power_rules.hpp"

#include <algorithm>
#include <cmath>

namespace birelay {

double cap_rate(double x) { return std::log2(1.0 + x); }

double waterfill_power(double level_num, double price, double gain) {
  if (level_num < 0.0 || !std::isfinite(level_num)) {
    throw std::invalid_argument("waterfill_power: negative water level");
  }
  if (level_num == 0.0) return 0.0;
  if (price <= 0.0) {
    throw NonPositivePrice("waterfill_power: price must be > 0");
  }
  if (gain <= 0.0) return 0.0;
  const double p = level_num / (kSigma * price) - 1.0 / gain;
  return p > 0.0 ? p : 0.0;
}

double waterfill_direct(double level_num, double alpha_k, double gain) {
  return waterfill_power(level_num, alpha_k, gain);
}

double waterfill_oneway_hop1(double lam_b1_k, double alpha_k, double gain) {
  return waterfill_power(lam_b1_k, alpha_k, gain);
}

double waterfill_oneway_hop2(double lam_b2_k, double alpha_r, double gain) {
  return waterfill_power(lam_b2_k, alpha_r, gain);
}

double mac_profit(double lam_c1_a, double lam_c1_b, double lam_ab,
                  double alpha_a, double alpha_b, double gain_a, double gain_b,
                  double p_a, double p_b) {
  const double xa = p_a * gain_a;
  const double xb = p_b * gain_b;
  return lam_c1_a * cap_rate(xa) + lam_c1_b * cap_rate(xb) +
         lam_ab * cap_rate(xa + xb) - alpha_a * p_a - alpha_b * p_b;
}

double bc_profit(double xi_a, double xi_b, double alpha_r, double gain_ra,
                 double gain_rb, double p) {
  // xi_a weights the rate delivered to B (user A's traffic), and vice versa.
  return xi_a * cap_rate(p * gain_rb) + xi_b * cap_rate(p * gain_ra) -
         alpha_r * p;
}

namespace {

struct MacGrad {
  double fa, fb;  // sigma-scaled stationarity residuals, Eq. (26) LHS - RHS
};

MacGrad mac_residuals(double lam_a, double lam_b, double lam_ab,
                      double alpha_a, double alpha_b, double ga, double gb,
                      double pa, double pb) {
  const double t = 1.0 + pa * ga + pb * gb;
  MacGrad g;
  g.fa = lam_a * ga / (1.0 + pa * ga) + lam_ab * ga / t - kSigma * alpha_a;
  g.fb = lam_b * gb / (1.0 + pb * gb) + lam_ab * gb / t - kSigma * alpha_b;
  return g;
}

}  // namespace

double mac_kkt_residual(double lam_c1_a, double lam_c1_b, double lam_ab,
                        double alpha_a, double alpha_b, double gain_a,
                        double gain_b, double p_a, double p_b) {
  const MacGrad g = mac_residuals(lam_c1_a, lam_c1_b, lam_ab, alpha_a, alpha_b,
                                  gain_a, gain_b, p_a, p_b);
  const double ra = p_a > 0.0 ? std::fabs(g.fa) : std::max(0.0, g.fa);
  const double rb = p_b > 0.0 ? std::fabs(g.fb) : std::max(0.0, g.fb);
  // A zero-gain coordinate has no equation: its power is pinned at 0.
  return std::max(gain_a > 0.0 ? ra : 0.0, gain_b > 0.0 ? rb : 0.0);
}

MacPowers solve_mac_powers(double lam_c1_a, double lam_c1_b, double lam_ab,
                           double alpha_a, double alpha_b, double gain_a,
                           double gain_b, double newton_tol) {
  if (lam_c1_a < 0.0 || lam_c1_b < 0.0 || lam_ab < 0.0) {
    throw std::invalid_argument("solve_mac_powers: negative multiplier");
  }
  if ((lam_c1_a + lam_ab > 0.0 && alpha_a <= 0.0) ||
      (lam_c1_b + lam_ab > 0.0 && alpha_b <= 0.0)) {
    throw NonPositivePrice("solve_mac_powers: price must be > 0");
  }

  // Dead coordinates reduce to one-dimensional water-filling with the
  // combined level lam_k^c1 + lam_AB^c.
  if (gain_a <= 0.0 && gain_b <= 0.0) return {0.0, 0.0};
  if (gain_a <= 0.0) {
    return {0.0, waterfill_power(lam_c1_b + lam_ab, alpha_b, gain_b)};
  }
  if (gain_b <= 0.0) {
    return {waterfill_power(lam_c1_a + lam_ab, alpha_a, gain_a), 0.0};
  }

  const auto value = [&](double pa, double pb) {
    return mac_profit(lam_c1_a, lam_c1_b, lam_ab, alpha_a, alpha_b, gain_a,
                      gain_b, pa, pb);
  };

  // Axis-face candidates: exact maximizers when the other power is pinned.
  MacPowers best{waterfill_power(lam_c1_a + lam_ab, alpha_a, gain_a), 0.0};
  double best_value = value(best.p_a, best.p_b);
  {
    const MacPowers cand{0.0,
                         waterfill_power(lam_c1_b + lam_ab, alpha_b, gain_b)};
    const double v = value(cand.p_a, cand.p_b);
    if (v > best_value) {
      best = cand;
      best_value = v;
    }
  }

  // Interior candidate: damped Newton on Eq. (26) from the decoupled
  // water-filling start (lam_AB term ignored).
  double pa = waterfill_power(lam_c1_a, alpha_a, gain_a);
  double pb = waterfill_power(lam_c1_b, alpha_b, gain_b);
  if (pa == 0.0 && pb == 0.0) {
    pa = pb = 1e-3;  // strictly inside so the Jacobian is well defined
  }
  MacGrad f = mac_residuals(lam_c1_a, lam_c1_b, lam_ab, alpha_a, alpha_b,
                            gain_a, gain_b, pa, pb);
  bool interior_ok = false;
  for (int it = 0; it < 80; ++it) {
    double merit = f.fa * f.fa + f.fb * f.fb;
    if (std::max(std::fabs(f.fa), std::fabs(f.fb)) < newton_tol) {
      interior_ok = pa > 0.0 && pb > 0.0;
      break;
    }
    const double ua = 1.0 + pa * gain_a;
    const double ub = 1.0 + pb * gain_b;
    const double t = 1.0 + pa * gain_a + pb * gain_b;
    const double jab = -lam_ab * gain_a * gain_b / (t * t);
    const double jaa = -lam_c1_a * gain_a * gain_a / (ua * ua) +
                       jab * gain_a / gain_b;
    const double jbb = -lam_c1_b * gain_b * gain_b / (ub * ub) +
                       jab * gain_b / gain_a;
    const double det = jaa * jbb - jab * jab;
    if (!(std::fabs(det) > 1e-300)) break;  // singular, rely on the faces
    const double dxa = -(jbb * f.fa - jab * f.fb) / det;
    const double dxb = -(jaa * f.fb - jab * f.fa) / det;
    bool improved = false;
    for (double step = 1.0; step >= 1.0 / 1024.0; step *= 0.5) {
      const double na = std::max(0.0, pa + step * dxa);
      const double nb = std::max(0.0, pb + step * dxb);
      const MacGrad nf = mac_residuals(lam_c1_a, lam_c1_b, lam_ab, alpha_a,
                                       alpha_b, gain_a, gain_b, na, nb);
      const double nmerit = nf.fa * nf.fa + nf.fb * nf.fb;
      if (nmerit < merit) {
        pa = na;
        pb = nb;
        f = nf;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (interior_ok) {
    const double v = value(pa, pb);
    if (v > best_value) {
      best = {pa, pb};
      best_value = v;
    }
  }

  const double scale =
      kSigma * (alpha_a + alpha_b) + lam_c1_a + lam_c1_b + lam_ab + 1.0;
  if (mac_kkt_residual(lam_c1_a, lam_c1_b, lam_ab, alpha_a, alpha_b, gain_a,
                       gain_b, best.p_a, best.p_b) > 1e-6 * scale) {
    throw NoConvergence("solve_mac_powers: no KKT-consistent candidate");
  }
  return best;
}

double bc_power(double xi_a, double xi_b, double alpha_r, double gain_ra,
                double gain_rb) {
  if (xi_a < 0.0 || xi_b < 0.0) {
    throw std::invalid_argument("bc_power: negative xi");
  }
  if (alpha_r <= 0.0) {
    if (xi_a * gain_rb + xi_b * gain_ra > 0.0) {
      throw NonPositivePrice("bc_power: price must be > 0");
    }
    return 0.0;
  }
  // Zero branch of Eq. (27): derivative at p = 0 is nonpositive.
  if (alpha_r >= (xi_b * gain_ra + xi_a * gain_rb) / kSigma) return 0.0;

  const double phi1 = alpha_r * gain_rb * gain_ra;
  const double phi2 = alpha_r * (gain_rb + gain_ra) -
                      (xi_a + xi_b) * gain_rb * gain_ra / kSigma;
  const double phi3 =
      alpha_r - (xi_b * gain_ra + xi_a * gain_rb) / kSigma;  // < 0 here
  if (phi1 <= 0.0) {
    // One gain is zero: the objective degenerates to plain water-filling.
    if (gain_rb > 0.0) return waterfill_power(xi_a, alpha_r, gain_rb);
    return waterfill_power(xi_b, alpha_r, gain_ra);
  }
  const double disc = phi2 * phi2 - 4.0 * phi1 * phi3;
  return (-phi2 + std::sqrt(disc)) / (2.0 * phi1);
}

}  // namespace birelay
