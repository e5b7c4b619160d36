#pragma once

/* The conformal factor y_tau = rho_tau^2 of the twisted cylinder metric.
 *
 * y solves the oscillator equation  y-double-dot = -2y(3y-2)  with the
 * first integral  y-dot^2 = -4(y^3 - y^2 + 4 tau^2).  The three real
 * roots y_minus <= 0 <= y_min <= y_max of the cubic y^3 - y^2 + 4 tau^2
 * determine the closed form
 *
 *     y(t) = y_max - (y_max - y_min) sn^2(r t, k),
 *     r^2  = y_max - y_minus,   k^2 = (y_max - y_min)/(y_max - y_minus),
 *
 * periodic with half-period p_tau = K(k)/r.  The admissible range is
 * tau in [0, 1/(3 sqrt 3)]: at tau=0 the solution degenerates to
 * sech^2 t (infinite period), at the top endpoint to the constant 2/3.
 */

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "sltk/elliptic.hpp"

namespace sltk {

inline const double kTauMax = 1.0 / (3.0 * std::sqrt(3.0));

/** \brief Roots, modulus, and period data attached to one value of tau.
 *  Immutable once built; share freely. */
struct TauParams {
  double tau = 0.0;
  double y_minus = 0.0;
  double y_min = 0.0;
  double y_max = 1.0;
  double r = 1.0;
  Modulus modulus;
  double p_tau = std::numeric_limits<double>::infinity();
};

namespace detail {

inline double cubic_value(double y, double tau) {
  return ((y - 1.0) * y) * y + 4.0 * tau * tau;
}

inline double cubic_slope(double y) { return y * (3.0 * y - 2.0); }

// One cautious Newton step; keeps the original value when the slope is
// too flat (near-double roots) or when the step does not improve.
inline double polish_root(double y, double tau) {
  for (int it = 0; it < 3; ++it) {
    const double f = cubic_value(y, tau);
    const double fp = cubic_slope(y);
    if (std::fabs(fp) < 1.0e-6) return y;
    const double y_next = y - f / fp;
    if (std::fabs(cubic_value(y_next, tau)) >= std::fabs(f)) return y;
    y = y_next;
  }
  return y;
}

}  // namespace detail

/** \brief Solves the cubic and assembles the modulus and period. */
inline TauParams solve_params(double tau) {
  if (!(tau >= 0.0 && tau <= kTauMax))
    throw std::domain_error("solve_params: tau must lie in [0, 1/(3 sqrt 3)]");
  TauParams p;
  p.tau = tau;
  if (tau == 0.0) {
    p.y_minus = 0.0;
    p.y_min = 0.0;
    p.y_max = 1.0;
    p.r = 1.0;
    p.modulus = Modulus::from_k(1.0);
    p.p_tau = std::numeric_limits<double>::infinity();
    return p;
  }
  if (tau == kTauMax) {
    p.y_minus = -1.0 / 3.0;
    p.y_min = 2.0 / 3.0;
    p.y_max = 2.0 / 3.0;
    p.r = 1.0;
    p.modulus = Modulus::from_k(0.0);
    p.p_tau = kHalfPi;
    return p;
  }
  // Trigonometric solution of y^3 - y^2 + 4 tau^2 = 0, whose shifted
  // form is depressed with p = -1/3, q = -2/27 + 4 tau^2.
  const double phi0 = std::acos(std::clamp(1.0 - 54.0 * tau * tau, -1.0, 1.0));
  const double third = 1.0 / 3.0;
  p.y_max = third + (2.0 * third) * std::cos(phi0 * third);
  p.y_min =
      third + (2.0 * third) * std::cos(phi0 * third - 2.0 * kPi * third);
  p.y_minus =
      third + (2.0 * third) * std::cos(phi0 * third - 4.0 * kPi * third);
  p.y_max = detail::polish_root(p.y_max, tau);
  p.y_min = detail::polish_root(p.y_min, tau);
  p.y_minus = detail::polish_root(p.y_minus, tau);
  p.r = std::sqrt(p.y_max - p.y_minus);
  const double k2 = (p.y_max - p.y_min) / (p.y_max - p.y_minus);
  p.modulus = Modulus::from_k(std::sqrt(std::clamp(k2, 0.0, 1.0)));
  p.p_tau = complete_K(p.modulus.k) / p.r;
  return p;
}

/** \brief The inverse parametrization tau = (1/2) y_min sqrt(1 - y_min). */
inline double ymin_to_tau(double y_min) {
  if (!(y_min >= 0.0 && y_min <= 2.0 / 3.0))
    throw std::domain_error("ymin_to_tau: y_min must lie in [0, 2/3]");
  return 0.5 * y_min * std::sqrt(1.0 - y_min);
}

/** \brief y_tau(t).  Even in t by construction (evaluates at |t|). */
inline double conformal_factor(const TauParams& p, double t) {
  const double ta = std::fabs(t);
  if (p.tau == 0.0) {
    const double s = 1.0 / std::cosh(ta);
    return s * s;
  }
  if (p.modulus.k == 0.0) return p.y_max;
  const double sn = jacobi(p.r * ta, p.modulus.k).sn;
  return p.y_max - (p.y_max - p.y_min) * sn * sn;
}

/** \brief dy/dt, odd in t. */
inline double conformal_factor_dot(const TauParams& p, double t) {
  const double sign = t < 0.0 ? -1.0 : 1.0;
  const double ta = std::fabs(t);
  if (p.tau == 0.0) {
    const double c = std::cosh(ta);
    return sign * (-2.0) * std::tanh(ta) / (c * c);
  }
  if (p.modulus.k == 0.0) return 0.0;
  const JacobiTriple j = jacobi(p.r * ta, p.modulus.k);
  return sign * (-2.0) * (p.y_max - p.y_min) * p.r * j.sn * j.cn * j.dn;
}

/** \brief d^2y/dt^2 through the oscillator identity -2y(3y-2). */
inline double conformal_factor_ddot(const TauParams& p, double t) {
  const double y = conformal_factor(p, t);
  return -2.0 * y * (3.0 * y - 2.0);
}

/** \brief dp_tau/dtau by implicit differentiation of the cubic roots.
 *  Valid in the interior; degenerates at both endpoints where a root
 *  collision makes the roots non-smooth in tau. */
inline double dp_dtau(const TauParams& p) {
  if (!(p.tau > 0.0 && p.tau < kTauMax))
    throw std::domain_error("dp_dtau: interior tau required");
  auto droot = [&](double y) {
    return -8.0 * p.tau / detail::cubic_slope(y);
  };
  const double dmax = droot(p.y_max);
  const double dmin = droot(p.y_min);
  const double dminus = droot(p.y_minus);
  const double dr = 0.5 * (dmax - dminus) / p.r;
  const double span = p.y_max - p.y_minus;
  const double dk2 =
      ((dmax - dmin) * span - (p.y_max - p.y_min) * (dmax - dminus)) /
      (span * span);
  const double dk = 0.5 * dk2 / p.modulus.k;
  return (dK_dk(p.modulus.k) * dk - p.p_tau * dr) / p.r;
}

/** \brief One row of the small-tau period report. */
struct AsymptoticsRow {
  double tau;
  double p_tau;
  double p_plus_half_log_tau;  // stays bounded as tau -> 0
  double dp_dtau_times_2tau;   // tends to -1
};

inline std::vector<AsymptoticsRow> period_asymptotics_report(
    const std::vector<double>& taus) {
  std::vector<AsymptoticsRow> rows;
  rows.reserve(taus.size());
  for (double tau : taus) {
    const TauParams p = solve_params(tau);
    AsymptoticsRow row;
    row.tau = tau;
    row.p_tau = p.p_tau;
    row.p_plus_half_log_tau = p.p_tau + 0.5 * std::log(tau);
    row.dp_dtau_times_2tau = dp_dtau(p) * 2.0 * tau;
    rows.push_back(row);
  }
  return rows;
}

inline std::string asymptotics_csv(const std::vector<AsymptoticsRow>& rows) {
  std::string out = "tau,p_tau,p_plus_half_log_tau,dp_dtau_times_2tau\n";
  char line[160];
  for (const AsymptoticsRow& r : rows) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", r.tau,
                  r.p_tau, r.p_plus_half_log_tau, r.dp_dtau_times_2tau);
    out += line;
  }
  return out;
}

/** \brief Checks the decay envelope y >= (2/3) e^{-2t} and the
 *  monotonicity of e^{2t} y on [0, p_tau].  Returns the largest
 *  violation found on a dense grid, 0 when both hold. */
inline double decay_envelope_check(const TauParams& p, int samples = 10000) {
  if (!(p.tau > 0.0 && p.tau < kTauMax))
    throw std::domain_error("decay_envelope_check: interior tau required");
  double violation = 0.0;
  double prev = conformal_factor(p, 0.0);
  for (int i = 0; i <= samples; ++i) {
    const double t = p.p_tau * static_cast<double>(i) / samples;
    const double y = conformal_factor(p, t);
    violation = std::max(
        violation, (2.0 / 3.0) * std::exp(-2.0 * t) - y);
    const double lifted = std::exp(2.0 * t) * y;
    if (i > 0) violation = std::max(violation, prev - lifted);
    prev = lifted;
  }
  return violation;
}

}  // namespace sltk
