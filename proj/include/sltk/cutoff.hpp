#pragma once

#include <cmath>
#include <stdexcept>

// Cutoff functions used for gluing and localization. The basic profile is
// the degree-7 polynomial step: with u = (x+1)/2,
//
//   Psi(x) = u^4 (35 - 84 u + 70 u^2 - 20 u^3),
//
// which rises from 0 to 1 across [-1,1] with three continuous derivatives
// vanishing at both junctions, and satisfies Psi(x) + Psi(-x) = 1.
// psi_cutoff(a,b,.) rescales it so that [a,b] maps to [-3,3]; the
// transition then occupies the middle third of the window and the function
// is constant near both endpoints. Reversing the arguments reverses the
// ramp, and psi_cutoff(a,b,t) + psi_cutoff(b,a,t) = 1.

namespace sltk {

inline double smooth_step(double x) {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double u = 0.5 * (x + 1.0);
  return u * u * u * u * (35.0 + u * (-84.0 + u * (70.0 - 20.0 * u)));
}

inline double smooth_step_deriv(double x) {
  if (x <= -1.0 || x >= 1.0) return 0.0;
  const double w = 1.0 - x * x;
  return 35.0 / 32.0 * w * w * w;
}

inline double smooth_step_deriv2(double x) {
  if (x <= -1.0 || x >= 1.0) return 0.0;
  const double w = 1.0 - x * x;
  return -105.0 / 16.0 * x * w * w;
}

inline double smooth_step_deriv3(double x) {
  if (x <= -1.0 || x >= 1.0) return 0.0;
  const double w = 1.0 - x * x;
  return -105.0 / 16.0 * w * (1.0 - 5.0 * x * x);
}

inline double psi_cutoff(double a, double b, double t) {
  if (a == b) throw std::domain_error("psi_cutoff: empty transition window");
  return smooth_step(6.0 * (t - a) / (b - a) - 3.0);
}

inline double psi_cutoff_deriv(double a, double b, double t) {
  if (a == b) throw std::domain_error("psi_cutoff: empty transition window");
  return smooth_step_deriv(6.0 * (t - a) / (b - a) - 3.0) * 6.0 / (b - a);
}

}  // namespace sltk
