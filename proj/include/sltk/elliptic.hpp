#pragma once

/* Jacobi elliptic functions and Legendre-form elliptic integrals.
 *
 * Conventions.  The modulus k lies in [0,1]; k' = sqrt(1-k^2) is the
 * complementary modulus and h = 1-k measures the distance to the
 * logarithmic endpoint.  sn/cn/dn follow the standard normalization
 * sn(0)=0, sn'(0)=1, with degenerate cases sn(u,0)=sin u and
 * sn(u,1)=tanh u.  The second-kind integral D(phi,k) is the integral of
 * dn^2 du with sin(phi)=sn u, i.e. the Legendre E(phi,k).  The
 * third-kind integral Lambda(u,alpha,k) integrates 1/(1-alpha^2 sn^2)
 * from 0 to u; a negative alpha_sq argument means an imaginary
 * characteristic.
 *
 * Implementation notes.  sn/cn/dn use the descending Landen ladder with
 * a small-modulus series base; each rung squares the distance to k=0,
 * so the ladder depth is uniformly bounded (about eight rungs even for
 * k = 1-1e-16).  K and E use the arithmetic-geometric mean.  Incomplete
 * integrals use Carlson's symmetric forms RF/RD/RJ with quasi-period
 * reduction, so they are valid for all real arguments without loss near
 * the quarter-period.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sltk {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHalfPi = 1.57079632679489661923;

/** \brief Modulus bundle k, k' = sqrt(1-k^2), h = 1-k. */
struct Modulus {
  double k = 0.0;
  double k_prime = 1.0;
  double h = 1.0;

  static Modulus from_k(double k) {
    if (!(k >= 0.0 && k <= 1.0))
      throw std::domain_error("Modulus::from_k: k must lie in [0,1]");
    Modulus m;
    m.k = k;
    m.h = 1.0 - k;
    m.k_prime = std::sqrt(m.h * (1.0 + k));
    return m;
  }
};

/** \brief One Jacobi triple sn, cn, dn at fixed (u,k). */
struct JacobiTriple {
  double sn, cn, dn;
};

/** \brief An argument u together with its amplitude phi = am(u,k). */
struct Amplitude {
  double u, phi;
};

namespace detail {

// Base-case series for k <= 1e-4; the truncation error is O(k^4) and
// therefore below 1e-16 here.
inline JacobiTriple jacobi_small_k(double u, double k) {
  const double su = std::sin(u), cu = std::cos(u);
  const double k2 = k * k;
  const double w = 0.25 * k2 * (u - su * cu);
  JacobiTriple j;
  j.sn = su - w * cu;
  j.cn = cu + w * su;
  j.dn = 1.0 - 0.5 * k2 * su * su;
  return j;
}

// Carlson symmetric forms, standard duplication scheme.  The deviation
// tolerance 1e-4 puts the Taylor-tail error near 1e-24, below roundoff.
inline constexpr double kCarlsonTol = 1.0e-4;

inline double carlson_rf(double x, double y, double z) {
  double ave = 0.0, dx = 0.0, dy = 0.0, dz = 0.0;
  for (int it = 0; it < 100; ++it) {
    const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    const double lam = sx * (sy + sz) + sy * sz;
    x = 0.25 * (x + lam);
    y = 0.25 * (y + lam);
    z = 0.25 * (z + lam);
    ave = (x + y + z) / 3.0;
    dx = (ave - x) / ave;
    dy = (ave - y) / ave;
    dz = (ave - z) / ave;
    if (std::max({std::fabs(dx), std::fabs(dy), std::fabs(dz)}) < kCarlsonTol)
      break;
  }
  const double e2 = dx * dy - dz * dz;
  const double e3 = dx * dy * dz;
  return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) /
         std::sqrt(ave);
}

inline double carlson_rd(double x, double y, double z) {
  double sum = 0.0, fac = 1.0;
  double ave = 0.0, dx = 0.0, dy = 0.0, dz = 0.0;
  for (int it = 0; it < 100; ++it) {
    const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    const double lam = sx * (sy + sz) + sy * sz;
    sum += fac / (sz * (z + lam));
    fac *= 0.25;
    x = 0.25 * (x + lam);
    y = 0.25 * (y + lam);
    z = 0.25 * (z + lam);
    ave = 0.2 * (x + y + 3.0 * z);
    dx = (ave - x) / ave;
    dy = (ave - y) / ave;
    dz = (ave - z) / ave;
    if (std::max({std::fabs(dx), std::fabs(dy), std::fabs(dz)}) < kCarlsonTol)
      break;
  }
  constexpr double c1 = 3.0 / 14.0, c2 = 1.0 / 6.0, c3 = 9.0 / 22.0,
                   c4 = 3.0 / 26.0, c5 = 0.25 * c3, c6 = 1.5 * c4;
  const double ea = dx * dy;
  const double eb = dz * dz;
  const double ec = ea - eb;
  const double ed = ea - 6.0 * eb;
  const double ee = ed + ec + ec;
  const double tail =
      1.0 + ed * (-c1 + c5 * ed - c6 * dz * ee) +
      dz * (c2 * ee + dz * (-c3 * ec + dz * c4 * ea));
  return 3.0 * sum + fac * tail / (ave * std::sqrt(ave));
}

inline double carlson_rc(double x, double y) {
  double ave = 0.0, s = 0.0;
  for (int it = 0; it < 100; ++it) {
    const double lam = 2.0 * std::sqrt(x) * std::sqrt(y) + y;
    x = 0.25 * (x + lam);
    y = 0.25 * (y + lam);
    ave = (x + 2.0 * y) / 3.0;
    s = (y - ave) / ave;
    if (std::fabs(s) < kCarlsonTol) break;
  }
  const double tail =
      1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)));
  return tail / std::sqrt(ave);
}

inline double carlson_rj(double x, double y, double z, double p) {
  double sum = 0.0, fac = 1.0;
  double ave = 0.0, dx = 0.0, dy = 0.0, dz = 0.0, dp = 0.0;
  for (int it = 0; it < 100; ++it) {
    const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    const double lam = sx * (sy + sz) + sy * sz;
    const double alpha = p * (sx + sy + sz) + sx * sy * sz;
    const double beta = p + lam;
    sum += fac * carlson_rc(alpha * alpha, p * beta * beta);
    fac *= 0.25;
    x = 0.25 * (x + lam);
    y = 0.25 * (y + lam);
    z = 0.25 * (z + lam);
    p = 0.25 * (p + lam);
    ave = 0.2 * (x + y + z + 2.0 * p);
    dx = (ave - x) / ave;
    dy = (ave - y) / ave;
    dz = (ave - z) / ave;
    dp = (ave - p) / ave;
    if (std::max({std::fabs(dx), std::fabs(dy), std::fabs(dz),
                  std::fabs(dp)}) < kCarlsonTol)
      break;
  }
  constexpr double c1 = 3.0 / 14.0, c2 = 1.0 / 3.0, c3 = 3.0 / 22.0,
                   c4 = 3.0 / 26.0, c5 = 0.75 * c3, c6 = 1.5 * c4,
                   c7 = 0.5 * c2, c8 = c3 + c3;
  const double ea = dx * (dy + dz) + dy * dz;
  const double eb = dx * dy * dz;
  const double ec = dp * dp;
  const double ed = ea - 3.0 * ec;
  const double ee = eb + 2.0 * dp * (ea - ec);
  const double tail =
      1.0 + ed * (-c1 + c5 * ed - c6 * ee) +
      eb * (c7 + dp * (-c8 + dp * c4)) + dp * ea * (c2 - dp * c3) -
      c2 * dp * ec;
  return 3.0 * sum + fac * tail / (ave * std::sqrt(ave));
}

}  // namespace detail

/** \brief Jacobi sn, cn, dn at argument u and modulus k in [0,1]. */
inline JacobiTriple jacobi(double u, double k) {
  if (!(k >= 0.0 && k <= 1.0))
    throw std::domain_error("jacobi: k must lie in [0,1]");
  if (k == 0.0) return {std::sin(u), std::cos(u), 1.0};
  if (k == 1.0) {
    const double s = 1.0 / std::cosh(u);
    return {std::tanh(u), s, s};
  }
  // Descending Landen ladder k -> (1-k')/(1+k').
  std::array<double, 16> ladder{};
  int depth = 0;
  double kk = k;
  while (kk > 1.0e-4 && depth < 16) {
    const double kp = std::sqrt((1.0 - kk) * (1.0 + kk));
    kk = (1.0 - kp) / (1.0 + kp);
    ladder[depth++] = kk;
    u /= 1.0 + kk;
  }
  JacobiTriple j = detail::jacobi_small_k(u, kk);
  // Ascend with the inverse Gauss transformation.
  for (int i = depth - 1; i >= 0; --i) {
    const double mu = ladder[i];
    const double s2 = j.sn * j.sn;
    const double den = 1.0 + mu * s2;
    j = {(1.0 + mu) * j.sn / den, j.cn * j.dn / den, (1.0 - mu * s2) / den};
  }
  return j;
}

/** \brief Complete integral of the first kind via the AGM.
 *  Throws for k=1, where the defining integral diverges. */
inline double complete_K(double k) {
  if (!(k >= 0.0 && k <= 1.0))
    throw std::domain_error("complete_K: k must lie in [0,1]");
  if (k == 1.0)
    throw std::domain_error("complete_K: divergent integral at k=1");
  double a = 1.0, b = std::sqrt((1.0 - k) * (1.0 + k));
  for (int it = 0; it < 60; ++it) {
    if (std::fabs(a - b) <= std::numeric_limits<double>::epsilon() * a) break;
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return kHalfPi / a;
}

/** \brief Complete integral of the second kind via the AGM. */
inline double complete_E(double k) {
  if (!(k >= 0.0 && k <= 1.0))
    throw std::domain_error("complete_E: k must lie in [0,1]");
  if (k == 1.0) return 1.0;
  double a = 1.0, b = std::sqrt((1.0 - k) * (1.0 + k));
  double csum = 0.5 * k * k, pow2 = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double c = 0.5 * (a - b);
    if (std::fabs(c) <= std::numeric_limits<double>::epsilon()) break;
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    pow2 *= 2.0;
    csum += 0.5 * pow2 * c * c;
  }
  return (kHalfPi / a) * (1.0 - csum);
}

namespace detail {

// Splits phi into n*pi + r with r in [-pi/2, pi/2].
inline void reduce_phase(double phi, double& r, double& n) {
  n = std::round(phi / kPi);
  r = phi - n * kPi;
}

}  // namespace detail

/** \brief Incomplete first-kind integral F(phi,k), valid for all real phi. */
inline double incomplete_F(double phi, double k) {
  if (!(k >= 0.0 && k <= 1.0))
    throw std::domain_error("incomplete_F: k must lie in [0,1]");
  if (k == 1.0) {
    if (std::fabs(phi) >= kHalfPi)
      throw std::domain_error("incomplete_F: divergent at k=1, |phi|>=pi/2");
    return std::atanh(std::sin(phi));
  }
  double r, n;
  detail::reduce_phase(phi, r, n);
  const double s = std::sin(r), c = std::cos(r);
  const double val = s * detail::carlson_rf(c * c, 1.0 - k * k * s * s, 1.0);
  if (n == 0.0) return val;
  return val + 2.0 * n * complete_K(k);
}

/** \brief Second-kind integral D(phi,k) = integral of dn^2 du with
 *  sin(phi) = sn(u).  Equals the Legendre-form E(phi,k). */
inline double incomplete_D(double phi, double k) {
  if (!(k >= 0.0 && k <= 1.0))
    throw std::domain_error("incomplete_D: k must lie in [0,1]");
  double r, n;
  detail::reduce_phase(phi, r, n);
  const double s = std::sin(r), c = std::cos(r);
  const double k2 = k * k;
  const double dns = 1.0 - k2 * s * s;
  const double val = s * detail::carlson_rf(c * c, dns, 1.0) -
                     (k2 / 3.0) * s * s * s *
                         detail::carlson_rd(c * c, dns, 1.0);
  if (n == 0.0) return val;
  return val + 2.0 * n * complete_E(k);
}

/** \brief Amplitude phi = am(u,k), continuous in u (not reduced mod pi). */
inline Amplitude amplitude(double u, double k) {
  if (k == 1.0) return {u, std::asin(std::tanh(u))};
  if (k == 0.0) return {u, u};
  const double K = complete_K(k);
  const double m = std::floor((u + K) / (2.0 * K));
  const double ur = u - 2.0 * m * K;
  const JacobiTriple j = jacobi(ur, k);
  const double phir = std::asin(std::clamp(j.sn, -1.0, 1.0));
  return {u, m * kPi + phir};
}

namespace detail {

// Lambda over one monotone stretch u in [0,K], through Carlson forms.
inline double lambda_principal(double u, double alpha_sq, double k,
                               double K) {
  if (u == 0.0) return 0.0;
  double phi;
  if (u >= K) {
    phi = kHalfPi;
  } else {
    phi = amplitude(u, k).phi;
  }
  const double s = std::sin(phi), c = std::cos(phi);
  const double dns = 1.0 - k * k * s * s;
  double val = s * carlson_rf(c * c, dns, 1.0);
  if (alpha_sq != 0.0)
    val += (alpha_sq / 3.0) * s * s * s *
           carlson_rj(c * c, dns, 1.0, 1.0 - alpha_sq * s * s);
  return val;
}

}  // namespace detail

/** \brief Third-kind integral Lambda(u, alpha, k): integral over [0,u] of
 *  1/(1 - alpha_sq * sn^2(t,k)).  alpha_sq < 1; negative values are the
 *  imaginary-characteristic branch.  Valid for all real u via the
 *  quasi-period Lambda(u+2K) = Lambda(u) + 2 Lambda(K). */
inline double third_kind_Lambda(double u, double alpha_sq, double k) {
  if (!(k >= 0.0 && k < 1.0))
    throw std::domain_error("third_kind_Lambda: k must lie in [0,1)");
  if (alpha_sq >= 1.0)
    throw std::domain_error(
        "third_kind_Lambda: characteristic alpha_sq must be < 1");
  const double K = complete_K(k);
  const double m = std::round(u / (2.0 * K));
  const double ur = u - 2.0 * m * K;
  const double sgn = ur < 0.0 ? -1.0 : 1.0;
  const double val = sgn * detail::lambda_principal(std::fabs(ur), alpha_sq,
                                                    k, K);
  if (m == 0.0) return val;
  const double lamK = detail::lambda_principal(K, alpha_sq, k, K);
  return val + 2.0 * m * lamK;
}

/** \brief Complete third-kind integral Lambda(K, alpha, k) through the
 *  real reduction with K, E, F, D.  Requires 0 < k < alpha < 1; other
 *  inputs raise the branch error (use third_kind_Lambda instead). */
inline double compellipint3(double alpha, double k) {
  if (!(k > 0.0 && k < alpha && alpha < 1.0))
    throw std::domain_error(
        "compellipint3: reduction branch requires 0 < k < alpha < 1");
  const double kp = std::sqrt((1.0 - k) * (1.0 + k));
  const double c =
      alpha / std::sqrt((alpha * alpha - k * k) * (1.0 - alpha * alpha));
  const double sphi = std::sqrt(alpha * alpha - k * k) / (alpha * kp);
  const double phi = std::asin(std::min(1.0, sphi));
  const double K = complete_K(k);
  const double E = complete_E(k);
  const double F = incomplete_F(phi, kp);
  const double D = incomplete_D(phi, kp);
  return c * (K * D - K * F + E * F);
}

/** \brief Complete third-kind integral Lambda(K, i*beta, k) with imaginary
 *  characteristic, through the real reduction. */
inline double compellipint3b(double beta, double k) {
  if (!(k > 0.0 && k < 1.0 && beta > 0.0))
    throw std::domain_error("compellipint3b: requires 0 < k < 1 and beta > 0");
  const double kp = std::sqrt((1.0 - k) * (1.0 + k));
  const double b2 = beta * beta;
  const double a = k * k / (b2 + k * k);
  const double b = beta / std::sqrt((b2 + k * k) * (b2 + 1.0));
  const double somega = beta / std::sqrt(b2 + k * k);
  const double omega = std::asin(std::min(1.0, somega));
  const double K = complete_K(k);
  const double E = complete_E(k);
  const double F = incomplete_F(omega, kp);
  const double D = incomplete_D(omega, kp);
  return a * K + b * (K * D - K * F + E * F);
}

/** \brief Values of K and E from the log expansions about k=1, in terms of
 *  h = 1-k, truncated after the h^2 terms. */
struct NearOneExpansion {
  double K, E;
};

inline NearOneExpansion expansions_near_k1(double h) {
  if (!(h > 0.0 && h < 1.0))
    throw std::domain_error("expansions_near_k1: h must lie in (0,1)");
  const double l = std::log(8.0 / h);
  const double Kp = kHalfPi * (1.0 + 0.5 * h + (5.0 / 16.0) * h * h);
  const double Jp = kHalfPi * (h + 0.25 * h * h);
  NearOneExpansion r;
  r.K = (Kp / kPi) * l - 0.25 * h - (7.0 / 32.0) * h * h;
  r.E = (Jp / kPi) * l + 1.0 - 0.5 * h - (5.0 / 16.0) * h * h;
  return r;
}

/** \brief Heuman lambda Lambda_0(phi,k) for phi in (0, pi/2), continuous
 *  at both modulus endpoints.  For h = 1-k below 1e-8 the complete
 *  integrals switch to their log expansions; the k'^2 factor multiplying
 *  K is kept explicit so the endpoint limit involves no cancellation. */
inline double heuman_lambda0(double phi, double k) {
  if (!(k >= 0.0 && k < 1.0))
    throw std::domain_error("heuman_lambda0: k must lie in [0,1)");
  const double h = 1.0 - k;
  const double kp2 = h * (1.0 + k);
  double K, E;
  if (h < 1.0e-8) {
    const NearOneExpansion x = expansions_near_k1(h);
    K = x.K;
    E = x.E;
  } else {
    K = complete_K(k);
    E = complete_E(k);
  }
  const double s = std::sin(phi), c = std::cos(phi);
  const double dns = 1.0 - kp2 * s * s;
  const double F = s * detail::carlson_rf(c * c, dns, 1.0);
  // D(phi,k') - F(phi,k') = -k'^2 S with S in the stable RD form.
  const double S =
      (1.0 / 3.0) * s * s * s * detail::carlson_rd(c * c, dns, 1.0);
  return (2.0 / kPi) * (E * F - kp2 * K * S);
}

/** \brief dK/dk = (E - k'^2 K) / (k k'^2).  Below k=1e-3 the difference
 *  E - k'^2 K is O(k^2) and cancellation-limited, so a series takes over
 *  (truncation there is below 1e-15). */
inline double dK_dk(double k) {
  if (!(k >= 0.0 && k < 1.0))
    throw std::domain_error("dK_dk: k must lie in [0,1)");
  if (k < 1.0e-3) {
    const double k2 = k * k;
    return kHalfPi * k * (0.5 + (9.0 / 16.0) * k2);
  }
  const double kp2 = (1.0 - k) * (1.0 + k);
  return (complete_E(k) - kp2 * complete_K(k)) / (k * kp2);
}

/** \brief dE/dk = (E - K) / k, with the same series handoff at k=1e-3. */
inline double dE_dk(double k) {
  if (!(k >= 0.0 && k < 1.0))
    throw std::domain_error("dE_dk: k must lie in [0,1)");
  if (k < 1.0e-3) {
    const double k2 = k * k;
    return -kHalfPi * k * (0.5 + (3.0 / 16.0) * k2);
  }
  return (complete_E(k) - complete_K(k)) / k;
}

}  // namespace sltk
