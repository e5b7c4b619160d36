#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sltk/elliptic.hpp"
#include "sltk/jet.hpp"
#include "sltk/join.hpp"
#include "sltk/profile.hpp"
#include "sltk/symmetry.hpp"

// The U(1)-invariant special Legendrian tori in S^5 and their twisted
// variants. Writing y for the conformal factor of tau, the immersion is
//
//   X = w1 e1 + w2 (cos s e2 - sin s e3),
//   w1 = -i sqrt(1-y) e^{i psi1},  w2 = sqrt(y) e^{i psi2},
//
// with odd phases solving (1-y) psi1' = 2 tau and y psi2' = -2 tau. Both
// phases have closed forms through the elliptic integral of the third kind,
// and the rotation angle per half period of y has an independent closed
// form through Heuman's lambda function as well as a direct quadrature;
// agreement of the routes is enforced at construction.
//
// At tau = 0 the surface degenerates to the equatorial sphere parametrized
// by w1 = tanh t, w2 = sech t, with both phases identically zero; that
// branch is kept real exactly rather than evaluated through the generic
// formulas.

namespace sltk {

struct TorusImmersion {
  TauParams params;
  double alpha_sq = 0.0;  // characteristic of the psi2 integral, (ymax-ymin)/ymax
  double beta_sq = 0.0;   // size of the negative characteristic for psi1
  double p_hat = kHalfPi;
};

namespace detail {

// Closed form for the rotation angle, pi times Heuman's lambda function at
// an angle built from the cubic roots. Valid up to and including the top of
// the family, where the modulus degenerates to zero.
inline double rotation_period_closed(const TauParams& p) {
  const double sin_phi = std::sqrt(p.y_minus / (p.y_minus - p.y_min));
  return kPi * heuman_lambda0(std::asin(sin_phi), p.modulus.k);
}

// Quadrature of psi1' = 2 tau / (1-y) over a half period. The integrand
// concentrates in a layer of width comparable to tau at t = 0, so the
// substitution t = 2 tau sinh(xi) is applied first; it renders the
// integrand order one and scale free for every tau in the family.
inline double rotation_period_quadrature(const TauParams& p) {
  const double tau = p.tau;
  const double xi_max = std::asinh(p.p_tau / (2.0 * tau));
  auto f = [&](double xi) {
    const double t = 2.0 * tau * std::sinh(xi);
    const double y = conformal_factor(p, t);
    return 2.0 * tau / (1.0 - y) * 2.0 * tau * std::cosh(xi);
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, 0.0, xi_max, 12, 1e-13);
}

}  // namespace detail

// Rotation angle per half period of the conformal factor, cross-checked
// against an independent quadrature of the phase derivative.
inline double rotation_period(const TauParams& p) {
  if (!(p.tau > 0.0))
    throw std::domain_error("rotation_period: requires tau > 0");
  const double closed = detail::rotation_period_closed(p);
  const double quad = detail::rotation_period_quadrature(p);
  if (std::fabs(closed - quad) > 1e-6)
    throw std::runtime_error(
        "rotation_period: closed form and quadrature disagree beyond 1e-6");
  return closed;
}

inline TorusImmersion make_torus(const TauParams& p) {
  TorusImmersion ti;
  ti.params = p;
  if (p.tau == 0.0) return ti;
  const double delta = p.y_max - p.y_min;
  ti.alpha_sq = delta / p.y_max;
  ti.beta_sq = delta / (1.0 - p.y_max);
  ti.p_hat = rotation_period(p);
  return ti;
}

// Odd phase carried by w1.
inline double phase1(const TorusImmersion& ti, double t) {
  const TauParams& p = ti.params;
  if (p.tau == 0.0) return 0.0;
  const double lam = third_kind_Lambda(p.r * t, -ti.beta_sq, p.modulus.k);
  return 2.0 * p.tau / ((1.0 - p.y_max) * p.r) * lam;
}

// Odd phase carried by w2.
inline double phase2(const TorusImmersion& ti, double t) {
  const TauParams& p = ti.params;
  if (p.tau == 0.0) return 0.0;
  const double lam = third_kind_Lambda(p.r * t, ti.alpha_sq, p.modulus.k);
  return -2.0 * p.tau / (p.y_max * p.r) * lam;
}

struct PhaseTable {
  std::vector<double> t, psi1, psi2;
};

inline PhaseTable phases(const TauParams& p, const std::vector<double>& t_grid) {
  const TorusImmersion ti = make_torus(p);
  PhaseTable tab;
  tab.t = t_grid;
  tab.psi1.reserve(t_grid.size());
  tab.psi2.reserve(t_grid.size());
  for (double t : t_grid) {
    tab.psi1.push_back(phase1(ti, t));
    tab.psi2.push_back(phase2(ti, t));
  }
  return tab;
}

namespace detail {

struct WPair {
  std::complex<double> w1, w2, dw1, dw2;
};

inline WPair w_functions(const TorusImmersion& ti, double t) {
  const TauParams& p = ti.params;
  WPair w;
  if (p.tau == 0.0) {
    const double th = std::tanh(t);
    const double se = 1.0 / std::cosh(t);
    w.w1 = th;
    w.w2 = se;
    w.dw1 = se * se;
    w.dw2 = -se * th;
    return w;
  }
  const std::complex<double> i(0.0, 1.0);
  const double y = conformal_factor(p, t);
  const double yd = conformal_factor_dot(p, t);
  w.w1 = -i * std::sqrt(1.0 - y) * std::exp(i * phase1(ti, t));
  w.w2 = std::sqrt(y) * std::exp(i * phase2(ti, t));
  w.dw1 = w.w1 * (-yd / (2.0 * (1.0 - y)) + i * (2.0 * p.tau / (1.0 - y)));
  w.dw2 = w.w2 * (yd / (2.0 * y) + i * (-2.0 * p.tau / y));
  return w;
}

}  // namespace detail

inline LegendrianJet immerse(const TorusImmersion& ti, double s, double t) {
  const auto w = detail::w_functions(ti, t);
  const double cs = std::cos(s), sn = std::sin(s);
  LegendrianJet j;
  j.X << w.w1, w.w2 * cs, -w.w2 * sn;
  j.X_s << 0.0, -w.w2 * sn, -w.w2 * cs;
  j.X_t << w.dw1, w.dw2 * cs, -w.dw2 * sn;
  return j;
}

// Argument of the determinant of the frame (X, X_t, X_s), in (-pi, pi].
// Zero identically on the torus family with this column order.
inline double lagrangian_angle(const LegendrianJet& j) {
  Mat3c m;
  m.col(0) = j.X;
  m.col(1) = j.X_t;
  m.col(2) = j.X_s;
  const std::complex<double> d = m.determinant();
  if (std::abs(d) < 1e-13)
    throw std::domain_error("lagrangian_angle: degenerate frame");
  return std::arg(d);
}

inline double gauss_curvature(const TauParams& p, double t) {
  if (p.tau == 0.0) return 1.0;
  const double y = conformal_factor(p, t);
  return 1.0 - 8.0 * p.tau * p.tau / (y * y * y);
}

// Membership of (k1 pi, 2 k2 p_tau) in the period lattice: k2 p_hat must be
// an even multiple of pi when k1 is even and an odd multiple when k1 is odd.
inline bool period_lattice_member(const TorusImmersion& ti, long k1, long k2,
                                  double tol = 1e-9) {
  const double v = static_cast<double>(k2) * ti.p_hat;
  if (k1 % 2 == 0) {
    const double n = 2.0 * kPi * std::round(v / (2.0 * kPi));
    return std::fabs(v - n) < tol;
  }
  const double n = 2.0 * kPi * std::round((v - kPi) / (2.0 * kPi)) + kPi;
  return std::fabs(v - n) < tol;
}

inline bool period_lattice_member(const TauParams& p, long k1, long k2,
                                  double tol = 1e-9) {
  return period_lattice_member(make_torus(p), k1, k2, tol);
}

// Parameter at which the torus closes with rotation angle
// (pi/2)(1 + 1/m), m = 4 m_bar - 1, found by bisection. The rotation angle
// is strictly increasing in tau.
inline TauParams closing_tau(int m_bar) {
  if (m_bar < 2) throw std::domain_error("closing_tau: m_bar must be at least 2");
  const int m = 4 * m_bar - 1;
  const double target = kHalfPi * (1.0 + 1.0 / m);
  double lo = 1e-8, hi = 0.19;
  double f_lo = detail::rotation_period_closed(solve_params(lo)) - target;
  double f_hi = detail::rotation_period_closed(solve_params(hi)) - target;
  if (!(f_lo < 0.0 && f_hi > 0.0))
    throw std::runtime_error("closing_tau: bracket does not straddle target");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = detail::rotation_period_closed(solve_params(mid)) - target;
    if (std::fabs(f) < 1e-12) return solve_params(mid);
    (f < 0.0 ? lo : hi) = mid;
    if (hi - lo < 1e-17) break;
  }
  return solve_params(0.5 * (lo + hi));
}

// Twisted variant: on the fundamental strip |t| <= p_tau the immersion is
// the torus for |t| <= 1, the torus twisted by q_tilde(alpha) for
// t in [2, p_tau], a cone-potential join in between, and the mirror image
// under the t-reflection pair for negative t. Successive strips differ by
// the period map t_tilde(2 p_hat) q_tilde(2 alpha).
struct TwistedImmersion {
  TorusImmersion base;
  double alpha = 0.0;
  double join_a = 1.0;
  double join_b = 2.0;
};

inline TwistedImmersion make_twisted(const TauParams& p, double alpha) {
  if (std::fabs(alpha) > 0.5)
    throw std::domain_error("make_twisted: |alpha| must not exceed 0.5");
  TwistedImmersion tw;
  tw.base = make_torus(p);
  if (p.p_tau <= tw.join_b + 0.02)
    throw std::domain_error(
        "make_twisted: half period p_tau must exceed the join window");
  tw.alpha = alpha;
  return tw;
}

namespace detail {

inline void apply_isometry(const AmbientIsometry& g, LegendrianJet& j) {
  j.X = g(j.X);
  j.X_s = g(j.X_s);
  j.X_t = g(j.X_t);
}

// Valid for t in [-join_a, p_tau].
inline LegendrianJet twisted_positive(const TwistedImmersion& tw, double s,
                                      double t) {
  if (t <= tw.join_a) return immerse(tw.base, s, t);
  const AmbientIsometry q = q_tilde(tw.alpha);
  if (t >= tw.join_b) {
    LegendrianJet j = immerse(tw.base, s, t);
    apply_isometry(q, j);
    return j;
  }
  JoinSpec sp;
  const TorusImmersion& base = tw.base;
  sp.X0 = [&base](double ss, double tt) { return immerse(base, ss, tt); };
  sp.X1 = [&base, q](double ss, double tt) {
    LegendrianJet j = immerse(base, ss, tt);
    apply_isometry(q, j);
    return j;
  };
  sp.a = tw.join_a;
  sp.b = tw.join_b;
  return join_immerse(sp, s, t);
}

inline LegendrianJet twisted_fundamental(const TwistedImmersion& tw, double s,
                                         double t) {
  if (t >= -tw.join_a) return twisted_positive(tw, s, t);
  LegendrianJet g = twisted_positive(tw, s, -t);
  // Reflection pair: X(s,t) = t_bar_tilde(X(s,-t)), which conjugates the
  // tangents and flips the sign of the t one.
  const AmbientIsometry tb = t_bar_tilde();
  LegendrianJet out;
  out.X = tb(g.X);
  out.X_s = tb(g.X_s);
  out.X_t = -tb(g.X_t);
  return out;
}

}  // namespace detail

inline LegendrianJet twisted_immerse(const TwistedImmersion& tw, double s,
                                     double t) {
  const double p = tw.base.params.p_tau;
  long j = 0;
  double t0 = t;
  if (std::isfinite(p)) {
    j = std::lround(std::floor((t + p) / (2.0 * p)));
    t0 = t - 2.0 * j * p;
  }
  LegendrianJet jet = detail::twisted_fundamental(tw, s, t0);
  if (j != 0) {
    const AmbientIsometry period = compose(
        t_tilde(2.0 * j * tw.base.p_hat), q_tilde(2.0 * j * tw.alpha));
    detail::apply_isometry(period, jet);
  }
  return jet;
}

// Twisted immersion with t rescaled so the half period becomes p_bar; the
// t tangent picks up the rescaling factor.
inline LegendrianJet reparametrized_immerse(const TwistedImmersion& tw,
                                            double p_bar, double s, double t) {
  const double c = tw.base.params.p_tau / p_bar;
  if (!std::isfinite(c) || c <= 0.0)
    throw std::domain_error("reparametrized_immerse: bad period ratio");
  LegendrianJet j = twisted_immerse(tw, s, c * t);
  j.X_t *= c;
  return j;
}

// Point cloud sampling of an immersion on a uniform grid, one row per node:
// s, t, then real and imaginary parts of the three coordinates.
inline std::string point_cloud_csv(
    const std::function<Vec3c(double, double)>& X, int ns, int nt, double t_lo,
    double t_hi) {
  std::string out = "s,t,re1,im1,re2,im2,re3,im3\n";
  char buf[256];
  for (int a = 0; a < ns; ++a) {
    const double s = 2.0 * kPi * a / ns;
    for (int b = 0; b < nt; ++b) {
      const double t = nt == 1 ? t_lo : t_lo + (t_hi - t_lo) * b / (nt - 1.0);
      const Vec3c v = X(s, t);
      std::snprintf(buf, sizeof buf,
                    "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s, t,
                    v(0).real(), v(0).imag(), v(1).real(), v(1).imag(),
                    v(2).real(), v(2).imag());
      out += buf;
    }
  }
  return out;
}

}  // namespace sltk
