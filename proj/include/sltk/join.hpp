#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include <Eigen/Dense>

#include "sltk/cutoff.hpp"
#include "sltk/jet.hpp"

// Exact Legendrian transition between two Legendrian immersions across a
// window in t. Over a region where a Legendrian surface writes as
// u + i v with u = Re X invertible against the parameters and the radial
// direction, the cone over it is the graph {x + i grad f(x)} of a potential
// f homogeneous of degree 2 on R^3, with grad f(r u) = r v and
// f = x . grad f / 2. Interpolating the potentials with a cutoff keeps the
// graph Lagrangian for every intermediate function, so the unit-sphere
// slice of the interpolated cone is Legendrian, and it reproduces each
// input exactly wherever the cutoffs are locked.
//
// The base point fed into the graph is interpolated between the two
// parametrizations, and the potential cutoff ramps on the middle third of
// the window in the t-chart of the first surface. Near the entry edge the
// output is then a point of the first surface with a slightly shifted
// parameter rather than a new surface, and the same happens at the exit
// edge with the second surface. Keeping the ramp as wide as the agreement
// zones allow matters here: the angle defect of the interpolant carries an
// inverse square of the ramp width through the potential's Hessian.

namespace sltk {

struct JoinSpec {
  std::function<LegendrianJet(double, double)> X0, X1;
  double a = 0.0;
  double b = 1.0;
};

namespace detail {

struct ConeChart {
  double s = 0.0, t = 0.0, r = 1.0;
  Eigen::Vector3d grad = Eigen::Vector3d::Zero();
  double f = 0.0;
  Eigen::RowVector3d dt_dx = Eigen::RowVector3d::Zero();
};

// Newton solve of r Re X(s,t) = x starting from (s0, t0, |x|).
inline ConeChart invert_cone_graph(
    const std::function<LegendrianJet(double, double)>& X,
    const Eigen::Vector3d& x, double s0, double t0) {
  ConeChart c;
  c.s = s0;
  c.t = t0;
  c.r = x.norm();
  for (int it = 0; it < 40; ++it) {
    const LegendrianJet j = X(c.s, c.t);
    const Eigen::Vector3d u = j.X.real();
    const Eigen::Vector3d F = c.r * u - x;
    Eigen::Matrix3d J;
    J.col(0) = c.r * j.X_s.real();
    J.col(1) = c.r * j.X_t.real();
    J.col(2) = u;
    if (F.norm() < 1e-14) {
      c.grad = c.r * j.X.imag();
      c.f = 0.5 * x.dot(c.grad);
      c.dt_dx = J.inverse().row(1);
      return c;
    }
    const Eigen::FullPivLU<Eigen::Matrix3d> lu(J);
    if (!lu.isInvertible())
      throw std::runtime_error("join: graph frame degenerate");
    const Eigen::Vector3d d = lu.solve(F);
    c.s -= d(0);
    c.t -= d(1);
    c.r -= d(2);
  }
  throw std::runtime_error("join: cone graph inversion did not converge");
}

}  // namespace detail

inline Vec3c join_position(const JoinSpec& sp, double s, double t) {
  const double psi_base = psi_cutoff(sp.a, sp.b, t);
  if (psi_base <= 0.0) return sp.X0(s, t).X;
  if (psi_base >= 1.0) return sp.X1(s, t).X;

  const Eigen::Vector3d u0 = sp.X0(s, t).X.real();
  const Eigen::Vector3d u1 = sp.X1(s, t).X.real();
  const Eigen::Vector3d x = (1.0 - psi_base) * u0 + psi_base * u1;

  const auto c0 = detail::invert_cone_graph(sp.X0, x, s, t);
  const double ph = psi_cutoff(sp.a, sp.b, c0.t);

  Eigen::Vector3d grad;
  if (ph <= 0.0) {
    grad = c0.grad;
  } else {
    const auto c1 = detail::invert_cone_graph(sp.X1, x, s, t);
    if (ph >= 1.0) {
      grad = c1.grad;
    } else {
      const double dph = psi_cutoff_deriv(sp.a, sp.b, c0.t);
      grad = (1.0 - ph) * c0.grad + ph * c1.grad +
             (c1.f - c0.f) * dph * c0.dt_dx.transpose();
    }
  }

  Vec3c Y;
  for (int j = 0; j < 3; ++j) Y(j) = std::complex<double>(x(j), grad(j));
  return Y.normalized();
}

// Tangents by fourth-order central differences of the position. The
// transition band is the only place this runs; outside it the inputs are
// returned with their own tangents.
inline LegendrianJet join_immerse(const JoinSpec& sp, double s, double t,
                                  double h = 1e-4) {
  const double psi_base = psi_cutoff(sp.a, sp.b, t);
  if (psi_base <= 0.0 && psi_cutoff(sp.a, sp.b, t + 2.0 * h) <= 0.0)
    return sp.X0(s, t);
  if (psi_base >= 1.0 && psi_cutoff(sp.a, sp.b, t - 2.0 * h) >= 1.0)
    return sp.X1(s, t);

  LegendrianJet j;
  j.X = join_position(sp, s, t);
  auto d5 = [&](const Vec3c& p2, const Vec3c& p1, const Vec3c& m1,
                const Vec3c& m2) {
    return (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
  };
  j.X_s = d5(join_position(sp, s + 2.0 * h, t), join_position(sp, s + h, t),
             join_position(sp, s - h, t), join_position(sp, s - 2.0 * h, t));
  j.X_t = d5(join_position(sp, s, t + 2.0 * h), join_position(sp, s, t + h),
             join_position(sp, s, t - h), join_position(sp, s, t - 2.0 * h));
  return j;
}

}  // namespace sltk
