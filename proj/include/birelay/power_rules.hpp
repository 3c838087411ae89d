#pragma once

#include <stdexcept>

#include "birelay/types.hpp"

namespace birelay {

struct NonPositivePrice : std::domain_error {
  using std::domain_error::domain_error;
};
struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// ln 2; rates are log2 throughout, so every stationarity condition carries
/// this factor.
inline constexpr double kSigma = 0.6931471805599453;

/// log2(1 + x), the capacity map C(x).
double cap_rate(double x);

/// Multi-level water-filling ((level_num/(sigma*price)) - 1/gain)^+.
/// Returns 0 for gain = 0; throws NonPositivePrice for price <= 0 when the
/// water level is positive.
double waterfill_power(double level_num, double price, double gain);

/// Direct transmission, level w_k + mu_k against price alpha_k.
double waterfill_direct(double level_num, double alpha_k, double gain);
/// One-way first hop, level lam_b1_k against the source price.
double waterfill_oneway_hop1(double lam_b1_k, double alpha_k, double gain);
/// One-way second hop, level w_k + mu_k - lam_b1_k against the relay price.
double waterfill_oneway_hop2(double lam_b2_k, double alpha_r, double gain);

struct MacPowers {
  double p_a = 0.0;
  double p_b = 0.0;
};

/// Two-way MAC phase powers: maximizer of
///   lam_a*C(pa*ga) + lam_b*C(pb*gb) + lam_ab*C(pa*ga + pb*gb)
///   - alpha_a*pa - alpha_b*pb
/// over pa, pb >= 0. Damped Newton on the stationarity system with the two
/// axis faces (closed-form water-filling with combined level) as fallback
/// candidates; the best of the KKT-consistent candidates is returned.
/// Throws NoConvergence if no candidate satisfies its optimality pattern.
MacPowers solve_mac_powers(double lam_c1_a, double lam_c1_b, double lam_ab,
                           double alpha_a, double alpha_b, double gain_a,
                           double gain_b, double newton_tol = 1e-12);

/// Two-way BC phase power: maximizer of
///   xi_a*C(p*g_rb) + xi_b*C(p*g_ra) - alpha_r*p  over p >= 0,
/// via the quadratic closed form; 0 on the priced-out branch.
double bc_power(double xi_a, double xi_b, double alpha_r, double gain_ra,
                double gain_rb);

/// Profit value of the MAC phase at given powers.
double mac_profit(double lam_c1_a, double lam_c1_b, double lam_ab,
                  double alpha_a, double alpha_b, double gain_a, double gain_b,
                  double p_a, double p_b);

/// Profit value of the BC phase at a given power.
double bc_profit(double xi_a, double xi_b, double alpha_r, double gain_ra,
                 double gain_rb, double p);

/// Largest residual of the stationarity/KKT pattern at (p_a, p_b): equation
/// residual on coordinates with p > 0, positive-gradient violation on pinned
/// coordinates. Used for diagnostics and tests.
double mac_kkt_residual(double lam_c1_a, double lam_c1_b, double lam_ab,
                        double alpha_a, double alpha_b, double gain_a,
                        double gain_b, double p_a, double p_b);

}  // namespace birelay
