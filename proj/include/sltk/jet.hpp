#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace sltk {

using Vec3c = Eigen::Vector3cd;
using Mat3c = Eigen::Matrix3cd;

// First order data of a surface immersed in S^5 subset C^3, at one point of
// the parametrizing cylinder.
struct LegendrianJet {
  Vec3c X;
  Vec3c X_s;
  Vec3c X_t;
};

// Pullback of the contact form lambda(V) = Im<z,V> along both coordinate
// directions. Vanishes identically for a Legendrian immersion.
inline double contact_residual(const LegendrianJet& j) {
  const double a = std::abs(std::imag(j.X.dot(j.X_s)));
  const double b = std::abs(std::imag(j.X.dot(j.X_t)));
  return std::max(a, b);
}

// Deviation from lying on the unit sphere with tangent vectors tangent to it.
inline double sphere_residual(const LegendrianJet& j) {
  const double n = std::abs(j.X.squaredNorm() - 1.0);
  const double a = std::abs(std::real(j.X.dot(j.X_s)));
  const double b = std::abs(std::real(j.X.dot(j.X_t)));
  return std::max(n, std::max(a, b));
}

struct MetricCoeffs {
  double g_ss;
  double g_st;
  double g_tt;
};

inline MetricCoeffs induced_metric(const LegendrianJet& j) {
  MetricCoeffs m;
  m.g_ss = j.X_s.squaredNorm();
  m.g_tt = j.X_t.squaredNorm();
  m.g_st = std::real(j.X_s.dot(j.X_t));
  return m;
}

}  // namespace sltk
