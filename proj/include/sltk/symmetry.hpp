#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sltk/elliptic.hpp"
#include "sltk/jet.hpp"

// The isometries of S^5 and of the parametrizing cylinder that the torus
// family and the glued surfaces are equivariant under. Ambient elements are
// unitary matrices, optionally composed with coordinate-wise complex
// conjugation applied first; cylinder elements are affine maps with signs.

namespace sltk {

struct AmbientIsometry {
  Mat3c matrix = Mat3c::Identity();
  bool conjugate_first = false;

  Vec3c operator()(const Vec3c& z) const {
    if (conjugate_first) return matrix * z.conjugate();
    return matrix * z;
  }
};

// compose(a, b) acts as a after b.
inline AmbientIsometry compose(const AmbientIsometry& a,
                               const AmbientIsometry& b) {
  AmbientIsometry r;
  r.matrix = a.conjugate_first ? Mat3c(a.matrix * b.matrix.conjugate())
                               : Mat3c(a.matrix * b.matrix);
  r.conjugate_first = a.conjugate_first != b.conjugate_first;
  return r;
}

inline AmbientIsometry identity_isometry() { return {}; }

// "Translation" along the circle spanned by e1 and Je1.
inline AmbientIsometry t_tilde(double x) {
  const std::complex<double> i(0.0, 1.0);
  AmbientIsometry r;
  r.matrix = Mat3c::Zero();
  r.matrix(0, 0) = std::exp(i * x);
  r.matrix(1, 1) = std::exp(-i * x / 2.0);
  r.matrix(2, 2) = std::exp(-i * x / 2.0);
  return r;
}

// "Rotation" with that circle as axis.
inline AmbientIsometry s_tilde(double x) {
  AmbientIsometry r;
  r.matrix = Mat3c::Zero();
  r.matrix(0, 0) = 1.0;
  r.matrix(1, 1) = std::cos(x);
  r.matrix(1, 2) = std::sin(x);
  r.matrix(2, 1) = -std::sin(x);
  r.matrix(2, 2) = std::cos(x);
  return r;
}

// "Twisting" around the same axis.
inline AmbientIsometry q_tilde(double x) {
  const std::complex<double> i(0.0, 1.0);
  AmbientIsometry r;
  r.matrix = Mat3c::Zero();
  r.matrix(0, 0) = 1.0;
  r.matrix(1, 1) = std::exp(i * x);
  r.matrix(2, 2) = std::exp(-i * x);
  return r;
}

// Order-g rotation used to place the g half-cylinders of the glued surface.
inline AmbientIsometry r_tilde(int g) {
  const double c = std::cos(2.0 * kPi / g);
  const double s = std::sin(2.0 * kPi / g);
  AmbientIsometry r;
  r.matrix = Mat3c::Zero();
  r.matrix(0, 0) = c;
  r.matrix(0, 1) = s;
  r.matrix(1, 0) = -s;
  r.matrix(1, 1) = c;
  r.matrix(2, 2) = 1.0;
  return r;
}

// Reflection w -> (-conj w1, conj w2, conj w3), fixing the real span of
// Je1, e2, e3.
inline AmbientIsometry t_bar_tilde() {
  AmbientIsometry r;
  r.matrix = Mat3c::Zero();
  r.matrix(0, 0) = -1.0;
  r.matrix(1, 1) = 1.0;
  r.matrix(2, 2) = 1.0;
  r.conjugate_first = true;
  return r;
}

// Reflection fixing the real span of e^{ix}Je1, e^{-ix/2}e2, e^{-ix/2}e3.
// Built from the fixed plane directly; it must agree with the composition
// t_tilde(2x) after t_bar_tilde, which the tests check.
inline AmbientIsometry t_bar_tilde_x(double x) {
  const std::complex<double> i(0.0, 1.0);
  AmbientIsometry r;
  r.matrix = Mat3c::Zero();
  r.matrix(0, 0) = -std::exp(2.0 * i * x);
  r.matrix(1, 1) = std::exp(-i * x);
  r.matrix(2, 2) = std::exp(-i * x);
  r.conjugate_first = true;
  return r;
}

// Reflection w -> (w1, w2, -w3), complex linear, fixing the real span of
// e1, Je1, e2, Je2.
inline AmbientIsometry s_bar_tilde() {
  AmbientIsometry r;
  r.matrix = Mat3c::Zero();
  r.matrix(0, 0) = 1.0;
  r.matrix(1, 1) = 1.0;
  r.matrix(2, 2) = -1.0;
  return r;
}

// s_tilde at angle pi; orthogonal reflection with respect to the span of
// e1 and Je1.
inline AmbientIsometry s_pi_tilde() {
  AmbientIsometry r;
  r.matrix = Mat3c::Zero();
  r.matrix(0, 0) = 1.0;
  r.matrix(1, 1) = -1.0;
  r.matrix(2, 2) = -1.0;
  return r;
}

// Multiplication by i, used in the commutation checks.
inline AmbientIsometry complex_structure() {
  AmbientIsometry r;
  r.matrix = Mat3c::Identity() * std::complex<double>(0.0, 1.0);
  return r;
}

// Affine symmetry of the cylinder, (s, t) -> (es*s + ss, et*t + ts) with
// signs es, et = +-1.
struct CylinderMap {
  double s_sign = 1.0;
  double s_shift = 0.0;
  double t_sign = 1.0;
  double t_shift = 0.0;

  std::pair<double, double> operator()(double s, double t) const {
    return {s_sign * s + s_shift, t_sign * t + t_shift};
  }
};

// compose_cyl(a, b) acts as a after b.
inline CylinderMap compose_cyl(const CylinderMap& a, const CylinderMap& b) {
  CylinderMap r;
  r.s_sign = a.s_sign * b.s_sign;
  r.s_shift = a.s_sign * b.s_shift + a.s_shift;
  r.t_sign = a.t_sign * b.t_sign;
  r.t_shift = a.t_sign * b.t_shift + a.t_shift;
  return r;
}

inline CylinderMap cyl_translate(double x) { return {1.0, 0.0, 1.0, x}; }
inline CylinderMap cyl_rotate(double x) { return {1.0, x, 1.0, 0.0}; }
inline CylinderMap cyl_t_reflect() { return {1.0, 0.0, -1.0, 0.0}; }
inline CylinderMap cyl_s_reflect() { return {-1.0, 0.0, 1.0, 0.0}; }
// Reflections about t = x and s = x respectively.
inline CylinderMap cyl_t_reflect_about(double x) {
  return compose_cyl(cyl_translate(2.0 * x), cyl_t_reflect());
}
inline CylinderMap cyl_s_reflect_about(double x) {
  return compose_cyl(cyl_rotate(2.0 * x), cyl_s_reflect());
}
inline CylinderMap cyl_s_pi() { return cyl_rotate(kPi); }

// Holomorphic volume form dz1 ^ dz2 ^ dz3 on a triple of vectors.
inline std::complex<double> holomorphic_volume(const Vec3c& u, const Vec3c& v,
                                               const Vec3c& w) {
  Mat3c m;
  m.col(0) = u;
  m.col(1) = v;
  m.col(2) = w;
  return m.determinant();
}

// Kaehler form, normalized so that omega(e1, Je1) = 1.
inline double kaehler_form(const Vec3c& u, const Vec3c& v) {
  return std::imag(u.dot(v));
}

struct IdentityCheck {
  std::string name;
  double defect = 0.0;
};

struct SymmetryReport {
  std::vector<IdentityCheck> checks;

  double max_defect() const {
    double m = 0.0;
    for (const auto& c : checks) m = std::max(m, c.defect);
    return m;
  }
  bool pass(double tol) const { return max_defect() <= tol; }
};

namespace detail {

inline double iso_distance(const AmbientIsometry& a, const AmbientIsometry& b) {
  if (a.conjugate_first != b.conjugate_first)
    return std::numeric_limits<double>::infinity();
  return (a.matrix - b.matrix).cwiseAbs().maxCoeff();
}

inline void push_check(SymmetryReport& rep, const std::string& name,
                       double defect) {
  rep.checks.push_back({name, defect});
}

}  // namespace detail

// Group identities among the ambient elements, verified at matrix level for
// a fixed set of sampled angles.
inline SymmetryReport check_commutation_table() {
  SymmetryReport rep;
  const std::vector<double> xs = {0.0, 0.37, 1.0, kHalfPi, 2.6, -1.2, 4.0};
  const std::vector<double> ys = {0.0, 0.81, -0.4, kPi, 3.3};
  const AmbientIsometry tb = t_bar_tilde();
  const AmbientIsometry sb = s_bar_tilde();
  const AmbientIsometry sp = s_pi_tilde();
  const AmbientIsometry jj = complex_structure();

  double d_commute = 0.0, d_conj_t = 0.0, d_conj_q = 0.0, d_vv = 0.0;
  for (double x : xs) {
    for (double y : ys) {
      const auto tx = t_tilde(x), qy = q_tilde(y);
      d_commute = std::max(
          d_commute, detail::iso_distance(compose(tx, qy), compose(qy, tx)));
      d_commute = std::max(
          d_commute, detail::iso_distance(compose(tx, sp), compose(sp, tx)));
      d_commute = std::max(
          d_commute, detail::iso_distance(compose(qy, sb), compose(sb, qy)));
      d_commute = std::max(
          d_commute, detail::iso_distance(compose(tx, jj), compose(jj, tx)));
      d_commute = std::max(
          d_commute, detail::iso_distance(compose(qy, jj), compose(jj, qy)));
    }
    d_conj_t = std::max(d_conj_t,
                        detail::iso_distance(compose(tb, compose(t_tilde(x), tb)),
                                             t_tilde(-x)));
    d_conj_q = std::max(d_conj_q,
                        detail::iso_distance(compose(tb, compose(q_tilde(x), tb)),
                                             q_tilde(-x)));
    d_vv = std::max(d_vv, detail::iso_distance(t_bar_tilde_x(x),
                                               compose(t_tilde(2.0 * x), tb)));
  }
  detail::push_check(rep, "diagonal elements commute", d_commute);
  detail::push_check(rep, "conjugation of t_tilde by t_bar_tilde", d_conj_t);
  detail::push_check(rep, "conjugation of q_tilde by t_bar_tilde", d_conj_q);
  detail::push_check(rep, "t_bar_tilde_x equals t_tilde(2x) after t_bar_tilde",
                     d_vv);

  detail::push_check(rep, "t_bar_tilde commutes with s_pi_tilde",
                     detail::iso_distance(compose(tb, sp), compose(sp, tb)));
  detail::push_check(rep, "t_bar_tilde commutes with s_bar_tilde",
                     detail::iso_distance(compose(tb, sb), compose(sb, tb)));

  // Anti-commutation with the complex structure: J then conjugate-reflect
  // equals the negative of conjugate-reflect then J.
  AmbientIsometry lhs = compose(tb, jj);
  AmbientIsometry rhs = compose(jj, tb);
  rhs.matrix = -rhs.matrix;
  detail::push_check(rep, "t_bar_tilde anticommutes with J",
                     detail::iso_distance(lhs, rhs));

  double d_period = 0.0;
  d_period = std::max(d_period,
                      detail::iso_distance(t_tilde(4.0 * kPi), identity_isometry()));
  d_period = std::max(d_period,
                      detail::iso_distance(q_tilde(2.0 * kPi), identity_isometry()));
  d_period = std::max(d_period,
                      detail::iso_distance(s_tilde(2.0 * kPi), identity_isometry()));
  detail::push_check(rep, "element periods", d_period);

  double d_rg = 0.0;
  for (int g : {2, 3, 4, 5, 7}) {
    AmbientIsometry p = identity_isometry();
    for (int j = 0; j < g; ++j) p = compose(r_tilde(g), p);
    d_rg = std::max(d_rg, detail::iso_distance(p, identity_isometry()));
  }
  detail::push_check(rep, "r_tilde has order g", d_rg);

  double d_unitary = 0.0, d_det = 0.0;
  for (double x : xs) {
    for (const AmbientIsometry& u :
         {t_tilde(x), s_tilde(x), q_tilde(x), r_tilde(3), sp, sb, tb,
          t_bar_tilde_x(x)}) {
      d_unitary = std::max(
          d_unitary, (u.matrix.adjoint() * u.matrix - Mat3c::Identity())
                         .cwiseAbs()
                         .maxCoeff());
    }
    for (const AmbientIsometry& u :
         {t_tilde(x), s_tilde(x), q_tilde(x), r_tilde(3)}) {
      d_det = std::max(d_det, std::abs(u.matrix.determinant() -
                                       std::complex<double>(1.0, 0.0)));
    }
  }
  detail::push_check(rep, "matrices unitary", d_unitary);
  detail::push_check(rep, "special unitary elements have det 1", d_det);

  // Cylinder-level relations for the corresponding affine maps.
  double d_cyl = 0.0;
  auto cyl_dist = [](const CylinderMap& a, const CylinderMap& b) {
    return std::max(std::max(std::fabs(a.s_sign - b.s_sign),
                             std::fabs(a.s_shift - b.s_shift)),
                    std::max(std::fabs(a.t_sign - b.t_sign),
                             std::fabs(a.t_shift - b.t_shift)));
  };
  for (double x : xs) {
    d_cyl = std::max(d_cyl, cyl_dist(cyl_t_reflect_about(x),
                                     compose_cyl(cyl_translate(2.0 * x),
                                                 cyl_t_reflect())));
    d_cyl = std::max(d_cyl, cyl_dist(cyl_s_reflect_about(x),
                                     compose_cyl(cyl_rotate(2.0 * x),
                                                 cyl_s_reflect())));
    d_cyl = std::max(
        d_cyl, cyl_dist(compose_cyl(cyl_t_reflect(), cyl_t_reflect()), {}));
    d_cyl = std::max(
        d_cyl, cyl_dist(compose_cyl(cyl_t_reflect_about(x),
                                    cyl_t_reflect_about(x)),
                        {}));
  }
  detail::push_check(rep, "cylinder reflection relations", d_cyl);

  return rep;
}

// Behavior of the holomorphic volume form and the Kaehler form under each
// element, evaluated on sampled vector tuples.
inline SymmetryReport check_form_pullbacks(unsigned seed = 20240517u,
                                           int samples = 64) {
  SymmetryReport rep;
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto rand_vec = [&]() {
    Vec3c v;
    for (int j = 0; j < 3; ++j)
      v(j) = std::complex<double>(gauss(rng), gauss(rng));
    return v;
  };

  const AmbientIsometry tb = t_bar_tilde();
  const AmbientIsometry sb = s_bar_tilde();
  double d_inv_omega = 0.0, d_inv_kf = 0.0;
  double d_tb_omega = 0.0, d_tb_kf = 0.0, d_sb_omega = 0.0, d_sb_kf = 0.0;
  for (int n = 0; n < samples; ++n) {
    const Vec3c u = rand_vec(), v = rand_vec(), w = rand_vec();
    const std::complex<double> om = holomorphic_volume(u, v, w);
    const double kf = kaehler_form(u, v);
    const double x = 6.0 * (n + 1.0) / samples - 3.0;
    for (const AmbientIsometry& g :
         {t_tilde(x), s_tilde(x), q_tilde(x), r_tilde(3), s_pi_tilde()}) {
      d_inv_omega = std::max(
          d_inv_omega, std::abs(holomorphic_volume(g(u), g(v), g(w)) - om));
      d_inv_kf = std::max(d_inv_kf, std::fabs(kaehler_form(g(u), g(v)) - kf));
    }
    d_tb_omega = std::max(
        d_tb_omega,
        std::abs(holomorphic_volume(tb(u), tb(v), tb(w)) + std::conj(om)));
    d_tb_kf = std::max(d_tb_kf, std::fabs(kaehler_form(tb(u), tb(v)) + kf));
    d_sb_omega = std::max(
        d_sb_omega, std::abs(holomorphic_volume(sb(u), sb(v), sb(w)) + om));
    d_sb_kf = std::max(d_sb_kf, std::fabs(kaehler_form(sb(u), sb(v)) - kf));
  }
  detail::push_check(rep, "volume form invariant under special unitary elements",
                     d_inv_omega);
  detail::push_check(rep, "kaehler form invariant under unitary elements",
                     d_inv_kf);
  detail::push_check(rep, "t_bar_tilde sends volume form to minus conjugate",
                     d_tb_omega);
  detail::push_check(rep, "t_bar_tilde negates kaehler form", d_tb_kf);
  detail::push_check(rep, "s_bar_tilde negates volume form", d_sb_omega);
  detail::push_check(rep, "s_bar_tilde preserves kaehler form", d_sb_kf);
  return rep;
}

// Sup over the grid of |amb(X(s,t)) - X(dom(s,t))|.
inline double equivariance_defect(
    const std::function<Vec3c(double, double)>& X, const AmbientIsometry& amb,
    const CylinderMap& dom, const std::vector<double>& s_grid,
    const std::vector<double>& t_grid) {
  double sup = 0.0;
  for (double s : s_grid) {
    for (double t : t_grid) {
      const auto [s2, t2] = dom(s, t);
      const Vec3c lhs = amb(X(s, t));
      const Vec3c rhs = X(s2, t2);
      sup = std::max(sup, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  }
  return sup;
}

// JSON rendering of a report: one object per identity plus the overall
// maximum. Kept dependency-free here; callers wanting a parsed document can
// feed the string to any JSON library.
inline std::string symmetry_report_json(const SymmetryReport& rep,
                                        int grid_size = 0) {
  std::string out = "{\n  \"checks\": [\n";
  char buf[64];
  for (std::size_t i = 0; i < rep.checks.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", rep.checks[i].defect);
    out += "    {\"identity\": \"" + rep.checks[i].name +
           "\", \"max_defect\": " + buf + "}";
    out += (i + 1 < rep.checks.size()) ? ",\n" : "\n";
  }
  std::snprintf(buf, sizeof buf, "%.17g", rep.max_defect());
  out += "  ],\n  \"max_defect\": ";
  out += buf;
  out += ",\n  \"grid_size\": " + std::to_string(grid_size) + "\n}\n";
  return out;
}

}  // namespace sltk
