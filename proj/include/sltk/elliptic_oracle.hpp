#pragma once

/* Quadrature-based reference values for the elliptic integrals.
 *
 * Everything here evaluates the defining integrals directly with adaptive
 * quadrature, using Boost's Jacobi functions where an sn appears inside an
 * integrand.  Nothing is shared with the production path in elliptic.hpp,
 * so the two can be compared as independent routes to the same numbers.
 * This path is slow and exists for test oracles and vector generation only.
 */

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>

namespace sltk::oracle {

namespace detail {

inline double kronrod(const auto& f, double lo, double hi) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, lo, hi, 12, 1.0e-14);
}

inline double tanhsinh(const auto& f, double lo, double hi) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, lo, hi, 1.0e-14);
}

}  // namespace detail

/** \brief K(k) as the integral of 1/sqrt(1-k^2 sin^2 x) over [0, pi/2]. */
inline double complete_K(double k) {
  if (k >= 1.0) throw std::domain_error("oracle::complete_K: k must be < 1");
  const double k2 = k * k;
  // Substituted so the near-singular region sits at t=0, where sin t
  // carries relative rounding error; with 1-k^2 sin^2 rewritten as
  // (1-k^2)+k^2 cos^2 the integrand is then accurate up to k = 1-1e-12.
  const double kp2 = (1.0 - k) * (1.0 + k);
  return detail::tanhsinh(
      [k2, kp2](double t) {
        const double s = std::sin(t);
        return 1.0 / std::sqrt(kp2 + k2 * s * s);
      },
      0.0, 1.5707963267948966192);
}

/** \brief E(k) as the integral of sqrt(1-k^2 sin^2 x) over [0, pi/2]. */
inline double complete_E(double k) {
  const double k2 = k * k;
  const double kp2 = (1.0 - k) * (1.0 + k);
  return detail::tanhsinh(
      [k2, kp2](double t) {
        const double s = std::sin(t);
        return std::sqrt(kp2 + k2 * s * s);
      },
      0.0, 1.5707963267948966192);
}

/** \brief First-kind incomplete integral F(phi,k) in Legendre form. */
inline double incomplete_F(double phi, double k) {
  const double k2 = k * k;
  const double kp2 = (1.0 - k) * (1.0 + k);
  return detail::kronrod(
      [k2, kp2](double x) {
        const double c = std::cos(x);
        return 1.0 / std::sqrt(kp2 + k2 * c * c);
      },
      0.0, phi);
}

/** \brief Second-kind integral D(phi,k): the integral of dn^2 du with
 *  sin(phi) = sn(u), equal to the Legendre form of E(phi,k). */
inline double incomplete_D(double phi, double k) {
  const double k2 = k * k;
  const double kp2 = (1.0 - k) * (1.0 + k);
  return detail::kronrod(
      [k2, kp2](double x) {
        const double c = std::cos(x);
        return std::sqrt(kp2 + k2 * c * c);
      },
      0.0, phi);
}

/** \brief Third-kind integral Lambda(u, alpha, k): the integral of
 *  1/(1 - alpha^2 sn^2(t,k)) dt over [0,u].  alpha_sq may be negative,
 *  which corresponds to an imaginary characteristic. */
inline double third_kind_Lambda(double u, double alpha_sq, double k) {
  if (alpha_sq >= 1.0)
    throw std::domain_error("oracle::third_kind_Lambda: alpha_sq must be < 1");
  return detail::kronrod(
      [alpha_sq, k](double t) {
        const double s = boost::math::jacobi_sn(k, t);
        return 1.0 / (1.0 - alpha_sq * s * s);
      },
      0.0, u);
}

/** \brief Heuman lambda composed from quadrature building blocks. */
inline double heuman_lambda0(double phi, double k) {
  const double kp = std::sqrt((1.0 - k) * (1.0 + k));
  const double K = complete_K(k);
  const double E = complete_E(k);
  const double F = incomplete_F(phi, kp);
  const double D = incomplete_D(phi, kp);
  return (2.0 / M_PI) * (K * D - K * F + E * F);
}

/** \brief Jacobi sn/cn/dn through Boost, for cross-implementation checks. */
struct JacobiRef {
  double sn, cn, dn;
};

inline JacobiRef jacobi(double u, double k) {
  JacobiRef r;
  r.sn = boost::math::jacobi_sn(k, u);
  r.cn = boost::math::jacobi_cn(k, u);
  r.dn = boost::math::jacobi_dn(k, u);
  return r;
}

}  // namespace sltk::oracle
