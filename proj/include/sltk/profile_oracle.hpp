#pragma once

/* Adaptive ODE reference for the conformal factor.
 *
 * Integrates the defining oscillator y'' = -2y(3y-2) from y(0) = y_max,
 * y'(0) = 0 with tight step control.  Shares nothing with the elliptic
 * evaluation path: even y_max is recomputed here by bisection.  Test
 * oracle only; slow by design.
 */

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/numeric/odeint.hpp>

namespace sltk::oracle {

namespace detail {

inline double ymax_by_bisection(double tau) {
  // The largest root of y^3 - y^2 + 4 tau^2 lies in [2/3, 1].
  auto f = [tau](double y) { return ((y - 1.0) * y) * y + 4.0 * tau * tau; };
  double lo = 2.0 / 3.0, hi = 1.0 + 1.0e-12;
  if (f(lo) > 0.0) return lo;  // top endpoint, double root at 2/3
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) <= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/** \brief Samples of the ODE solution at the (sorted, nonnegative) grid
 *  times.  Returns one y value per grid entry. */
inline std::vector<double> conformal_factor_ode_oracle(
    double tau, const std::vector<double>& t_grid) {
  if (!(tau >= 0.0 && tau <= 1.0 / (3.0 * std::sqrt(3.0))))
    throw std::domain_error("ode oracle: tau out of range");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] < 0.0 || (i > 0 && t_grid[i] < t_grid[i - 1]))
      throw std::invalid_argument("ode oracle: grid must be sorted, t >= 0");
  }
  using state = std::array<double, 2>;
  auto rhs = [](const state& x, state& dxdt, double) {
    dxdt[0] = x[1];
    dxdt[1] = -2.0 * x[0] * (3.0 * x[0] - 2.0);
  };
  auto stepper = boost::numeric::odeint::make_controlled<
      boost::numeric::odeint::runge_kutta_fehlberg78<state>>(1.0e-12,
                                                             1.0e-12);
  state x = {detail::ymax_by_bisection(tau), 0.0};
  std::vector<double> out;
  out.reserve(t_grid.size());
  double t = 0.0;
  for (double target : t_grid) {
    if (target > t) {
      boost::numeric::odeint::integrate_adaptive(stepper, rhs, x, t, target,
                                                 1.0e-4);
      t = target;
    }
    out.push_back(x[0]);
  }
  return out;
}

}  // namespace sltk::oracle
