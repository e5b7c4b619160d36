#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "sltk/jet.hpp"
#include "sltk/profile.hpp"
#include "sltk/profile_oracle.hpp"

// Independent routes to the immersion data: direct integration of the
// first order system for (w1, w2), the frame fields generated by the
// rotation axis, and a finite-difference route to the curvature. Slower
// and derived from different identities than the closed forms they are
// checked against.

namespace sltk::oracle {

// Integrates w1' = conj(w2)^2, w2' = -conj(w1 w2) from the symmetric point
// w(0) = (-i sqrt(1-ymax), sqrt(ymax)), returning (w1, w2) at each node of
// the sorted nonnegative grid.
inline std::vector<std::array<std::complex<double>, 2>> w_ode_oracle(
    double tau, const std::vector<double>& t_grid) {
  namespace ode = boost::numeric::odeint;
  using state = std::array<double, 4>;

  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] < 0.0 || (i > 0 && t_grid[i] < t_grid[i - 1]))
      throw std::invalid_argument("w_ode_oracle: grid must be sorted, >= 0");
  }

  const double y_max = detail::ymax_by_bisection(tau);
  auto rhs = [](const state& w, state& dw, double) {
    const std::complex<double> w1(w[0], w[1]), w2(w[2], w[3]);
    const std::complex<double> d1 = std::conj(w2) * std::conj(w2);
    const std::complex<double> d2 = -std::conj(w1 * w2);
    dw = {d1.real(), d1.imag(), d2.real(), d2.imag()};
  };

  std::vector<std::array<std::complex<double>, 2>> out;
  out.reserve(t_grid.size());
  state w = {0.0, -std::sqrt(1.0 - y_max), std::sqrt(y_max), 0.0};
  auto stepper = ode::make_controlled(
      1e-12, 1e-12, ode::runge_kutta_fehlberg78<state>());
  double t_prev = 0.0;
  for (double t : t_grid) {
    if (t > t_prev) {
      ode::integrate_adaptive(stepper, rhs, w, t_prev, t, 1e-3);
      t_prev = t;
    }
    out.push_back({std::complex<double>(w[0], w[1]),
                   std::complex<double>(w[2], w[3])});
  }
  return out;
}

// X_s and X_t recovered pointwise from the position alone, through the
// generator A of the rotation family and the conjugate-bilinear cross
// product. Used to cross-check the analytic tangents.
inline Vec3c conj_cross(const Vec3c& u, const Vec3c& v) {
  Vec3c w;
  w(0) = std::conj(u(1)) * std::conj(v(2)) - std::conj(u(2)) * std::conj(v(1));
  w(1) = std::conj(u(2)) * std::conj(v(0)) - std::conj(u(0)) * std::conj(v(2));
  w(2) = std::conj(u(0)) * std::conj(v(1)) - std::conj(u(1)) * std::conj(v(0));
  return w;
}

inline Vec3c frame_Xs(const Vec3c& X) {
  Vec3c v;
  v << 0.0, X(2), -X(1);
  return v;
}

inline Vec3c frame_Xt(const Vec3c& X) { return conj_cross(frame_Xs(X), X); }

// Curvature of the metric y (ds^2 + dt^2) by central differences of log y,
// kappa = -(log y)'' / (2 y).
inline double gauss_curvature_fd(const TauParams& p, double t,
                                 double h = 1e-3) {
  auto ly = [&](double u) { return std::log(conformal_factor(p, u)); };
  const double second =
      (-ly(t + 2.0 * h) + 16.0 * ly(t + h) - 30.0 * ly(t) + 16.0 * ly(t - h) -
       ly(t - 2.0 * h)) /
      (12.0 * h * h);
  return -second / (2.0 * conformal_factor(p, t));
}

// Tangents of an arbitrary position map by fourth-order differences;
// validates analytic jets and supplies jets where none are coded.
inline LegendrianJet jet_fd(const std::function<Vec3c(double, double)>& pos,
                            double s, double t, double h = 1e-4) {
  LegendrianJet j;
  j.X = pos(s, t);
  auto d5 = [&](const Vec3c& p2, const Vec3c& p1, const Vec3c& m1,
                const Vec3c& m2) {
    return (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
  };
  j.X_s = d5(pos(s + 2.0 * h, t), pos(s + h, t), pos(s - h, t),
             pos(s - 2.0 * h, t));
  j.X_t = d5(pos(s, t + 2.0 * h), pos(s, t + h), pos(s, t - h),
             pos(s, t - 2.0 * h));
  return j;
}

}  // namespace sltk::oracle
