#pragma once

// Hamiltonian perturbation of a Legendrian immersion by a scalar field on
// the surface. The field is extended off the surface, constant toward the
// surface and homogeneous of degree two along rays, and the immersion is
// pushed through the unit-time flow of the Hamiltonian vector field of the
// extension. That flow preserves the Legendrian condition exactly, so the
// defect of the perturbed surface comes only from the discretization.
//
// The same mechanism specializes to the ambient Hermitian quadratics,
// whose Hamiltonian fields are special unitary Killing fields with closed
// form flows, and to the normalized kernel fields of the linearized
// operator on the glued surface.

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sltk/jet.hpp"
#include "sltk/symmetry.hpp"

namespace sltk {

// A scalar field on a chart. Declared symmetries are folded into the
// arguments before evaluation: a positive period folds the first argument
// into [0, s_period), and a positive midline evaluates arguments above it
// at the reflected parameter.
struct ScalarField {
  std::function<double(double, double)> value;
  double s_period = 0.0;
  double t_reflect = 0.0;

  double operator()(double s, double t) const {
    if (t_reflect > 0.0 && t > t_reflect) t = 2.0 * t_reflect - t;
    if (s_period > 0.0) s -= s_period * std::floor(s / s_period);
    return value(s, t);
  }
};

// A field tabulated on a uniform grid, evaluated by bilinear
// interpolation and clamped to the grid rectangle.
inline ScalarField bilinear_field(double s0, double t0, double ds, double dt,
                                  std::vector<std::vector<double>> rows) {
  if (rows.size() < 2 || rows.front().size() < 2)
    throw std::invalid_argument("bilinear_field: need at least a 2 by 2 grid");
  if (!(ds > 0.0) || !(dt > 0.0))
    throw std::invalid_argument("bilinear_field: grid steps must be positive");
  const int nt = static_cast<int>(rows.size());
  const int ns = static_cast<int>(rows.front().size());
  for (const auto& row : rows)
    if (static_cast<int>(row.size()) != ns)
      throw std::invalid_argument("bilinear_field: ragged grid");
  ScalarField f;
  f.value = [=, rows = std::move(rows)](double s, double t) {
    double x = (s - s0) / ds, y = (t - t0) / dt;
    x = std::min(std::max(x, 0.0), ns - 1.0);
    y = std::min(std::max(y, 0.0), nt - 1.0);
    const int i = std::min(static_cast<int>(x), ns - 2);
    const int j = std::min(static_cast<int>(y), nt - 2);
    const double a = x - i, b = y - j;
    return (1.0 - b) * ((1.0 - a) * rows[j][i] + a * rows[j][i + 1]) +
           b * ((1.0 - a) * rows[j + 1][i] + a * rows[j + 1][i + 1]);
  };
  return f;
}

// An immersion presented as a chart jet evaluator.
struct ImmersionEval {
  std::function<LegendrianJet(double, double)> jet;
  LegendrianJet operator()(double s, double t) const { return jet(s, t); }
};

// A traceless Hermitian coefficient matrix for the ambient quadratic
// z -> z* a z.
struct HermitianQuadratic {
  Mat3c a;
};

inline HermitianQuadratic hermitian_quadratic(const Mat3c& a) {
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-14)
    throw std::invalid_argument(
        "hermitian_quadratic: coefficient matrix is not Hermitian");
  if (std::abs(a.trace()) > 1e-14)
    throw std::invalid_argument(
        "hermitian_quadratic: coefficient matrix has nonzero trace");
  return HermitianQuadratic{a};
}

// The quadratic generating the sliding family t_tilde.
inline HermitianQuadratic sliding_quadratic() {
  Mat3c a = Mat3c::Zero();
  a(0, 0) = -0.5;
  a(1, 1) = 0.25;
  a(2, 2) = 0.25;
  return HermitianQuadratic{a};
}

// The quadratic generating the twisting family q_tilde.
inline HermitianQuadratic twisting_quadratic() {
  Mat3c a = Mat3c::Zero();
  a(1, 1) = -0.5;
  a(2, 2) = 0.5;
  return HermitianQuadratic{a};
}

// The cross quadratic spanning, with the sliding one, the kernel of the
// linearized operator that survives on the glued surface.
inline HermitianQuadratic cross_quadratic() {
  Mat3c a = Mat3c::Zero();
  a(1, 2) = -0.5;
  a(2, 1) = -0.5;
  return HermitianQuadratic{a};
}

// Hamiltonian data of a traceless Hermitian quadratic. The potential is
// z* a z, its Hamiltonian field is -2 i a z, and the flow is the special
// unitary exp(-2 i a x).
struct KillingField {
  Mat3c a;

  double value(const Vec3c& z) const {
    return (z.adjoint() * a * z)(0, 0).real();
  }

  Vec3c field(const Vec3c& z) const {
    return std::complex<double>(0.0, -2.0) * (a * z);
  }

  AmbientIsometry flow(double x) const {
    Eigen::SelfAdjointEigenSolver<Mat3c> es(a);
    Mat3c u = Mat3c::Zero();
    for (int k = 0; k < 3; ++k) {
      const std::complex<double> phase =
          std::exp(std::complex<double>(0.0, -2.0 * es.eigenvalues()[k] * x));
      u += phase * es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
    }
    AmbientIsometry r;
    r.matrix = u;
    return r;
  }
};

inline KillingField killing_field(const HermitianQuadratic& q) {
  return KillingField{q.a};
}

struct PerturbOptions {
  int steps = 16;            // substeps of the unit-time flow
  double grad_h = 1e-5;      // ambient gradient stencil step
  double jet_h = 1e-3;       // chart stencil step for the perturbed jet
  double tube_radius = 0.25; // admissible surface distance relative to radius
  double radius = 1.0;       // ambient sphere radius
};

// Radial defects of the flow, recorded before each renormalization. The
// first substep leaves the surface tangentially, so its defect shrinks
// faster than the later ones as the substep count grows.
struct FlowDiagnostics {
  double max_drift = 0.0;
  double first_drift = 0.0;
};

namespace detail {

struct ChartPoint {
  double s = 0.0;
  double t = 0.0;
  double dist = 0.0;
};

// Nearest point of the immersed chart to an ambient point, by Gauss
// iteration on the squared distance warm started at the given parameters.
inline ChartPoint closest_point(const ImmersionEval& X, const Vec3c& q,
                                double s0, double t0) {
  double s = s0, t = t0;
  for (int iter = 0; iter < 80; ++iter) {
    const LegendrianJet j = X(s, t);
    const Vec3c r = q - j.X;
    const double gs = (j.X_s.adjoint() * r)(0, 0).real();
    const double gt = (j.X_t.adjoint() * r)(0, 0).real();
    const double ass = j.X_s.squaredNorm();
    const double ast = (j.X_s.adjoint() * j.X_t)(0, 0).real();
    const double att = j.X_t.squaredNorm();
    const double det = ass * att - ast * ast;
    if (!(det > 1e-18))
      throw std::runtime_error("closest_point: chart frame degenerate");
    const double ds = (att * gs - ast * gt) / det;
    const double dt = (ass * gt - ast * gs) / det;
    s += ds;
    t += dt;
    if (std::fabs(ds) + std::fabs(dt) < 1e-11)
      return ChartPoint{s, t, (q - X(s, t).X).norm()};
  }
  throw std::runtime_error("closest_point: projection did not converge");
}

// Degree two homogeneous extension of a surface scalar and its
// Hamiltonian field. Each evaluation projects the renormalized point back
// to the chart; the chart parameters of the projection serve as the warm
// start for the next one, so consecutive evaluations track the flow.
class HamiltonianExtension {
 public:
  HamiltonianExtension(ImmersionEval X, ScalarField f, PerturbOptions opt)
      : X_(std::move(X)), f_(std::move(f)), opt_(opt) {}

  double value(const Vec3c& w, double& s_hint, double& t_hint) const {
    const double len = w.norm();
    const Vec3c q = (opt_.radius / len) * w;
    const ChartPoint cp = closest_point(X_, q, s_hint, t_hint);
    if (cp.dist > opt_.tube_radius * opt_.radius)
      throw std::runtime_error(
          "hamiltonian_perturb: perturbation too large, the flow left the "
          "tubular neighborhood of the surface");
    s_hint = cp.s;
    t_hint = cp.t;
    const double scale = len / opt_.radius;
    return scale * scale * f_(cp.s, cp.t);
  }

  Vec3c field(const Vec3c& w, double& s_hint, double& t_hint) const {
    const double h = opt_.grad_h;
    Vec3c grad;
    for (int k = 0; k < 3; ++k) {
      std::complex<double> gk(0.0, 0.0);
      for (int part = 0; part < 2; ++part) {
        const std::complex<double> dir =
            part == 0 ? std::complex<double>(1.0, 0.0)
                      : std::complex<double>(0.0, 1.0);
        Vec3c wp = w, wm = w;
        wp[k] += h * dir;
        wm[k] -= h * dir;
        double sp = s_hint, tp = t_hint;
        const double fp = value(wp, sp, tp);
        double sm = s_hint, tm = t_hint;
        const double fm = value(wm, sm, tm);
        const double d = (fp - fm) / (2.0 * h);
        gk += part == 0 ? std::complex<double>(d, 0.0)
                        : std::complex<double>(0.0, d);
      }
      grad[k] = gk;
    }
    value(w, s_hint, t_hint);
    return std::complex<double>(0.0, -1.0) * grad;
  }

 private:
  ImmersionEval X_;
  ScalarField f_;
  PerturbOptions opt_;
};

}  // namespace detail

// The perturbed immersion. Positions are the unit-time flow images of the
// chart positions; jets difference the flowed positions, so each jet
// evaluation runs a small bundle of flows.
struct PerturbedImmersion {
  std::function<Vec3c(double, double)> position;
  ImmersionEval eval;
  std::shared_ptr<FlowDiagnostics> diagnostics;

  LegendrianJet operator()(double s, double t) const { return eval(s, t); }
};

inline PerturbedImmersion hamiltonian_perturb(const ImmersionEval& X,
                                              const ScalarField& f,
                                              const PerturbOptions& opt) {
  if (opt.steps < 1)
    throw std::invalid_argument("hamiltonian_perturb: steps must be positive");
  if (!(opt.grad_h > 0.0) || !(opt.jet_h > 0.0))
    throw std::invalid_argument(
        "hamiltonian_perturb: stencil steps must be positive");
  const auto ext = std::make_shared<detail::HamiltonianExtension>(X, f, opt);
  const auto diag = std::make_shared<FlowDiagnostics>();
  const double radius = opt.radius;
  const int steps = opt.steps;

  auto position = [ext, diag, X, radius, steps](double s, double t) -> Vec3c {
    Vec3c w = X(s, t).X;
    double sh = s, th = t;
    const double dt = 1.0 / steps;
    for (int k = 0; k < steps; ++k) {
      const Vec3c k1 = ext->field(w, sh, th);
      const Vec3c k2 = ext->field(w + 0.5 * dt * k1, sh, th);
      const Vec3c k3 = ext->field(w + 0.5 * dt * k2, sh, th);
      const Vec3c k4 = ext->field(w + dt * k3, sh, th);
      w += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      const double len = w.norm();
      const double drift = std::fabs(len - radius);
      diag->max_drift = std::max(diag->max_drift, drift);
      if (k == 0) diag->first_drift = std::max(diag->first_drift, drift);
      w *= radius / len;
    }
    return w;
  };

  const double h = opt.jet_h;
  auto jet = [position, h](double s, double t) -> LegendrianJet {
    LegendrianJet j;
    j.X = position(s, t);
    j.X_s = (position(s - 2.0 * h, t) - 8.0 * position(s - h, t) +
             8.0 * position(s + h, t) - position(s + 2.0 * h, t)) /
            (12.0 * h);
    j.X_t = (position(s, t - 2.0 * h) - 8.0 * position(s, t - h) +
             8.0 * position(s, t + h) - position(s, t + 2.0 * h)) /
            (12.0 * h);
    return j;
  };

  PerturbedImmersion p;
  p.position = position;
  p.eval = ImmersionEval{jet};
  p.diagnostics = diag;
  return p;
}

inline PerturbedImmersion hamiltonian_perturb(const ImmersionEval& X,
                                              const ScalarField& f,
                                              int steps = 16) {
  PerturbOptions opt;
  opt.steps = steps;
  return hamiltonian_perturb(X, f, opt);
}

namespace detail {

inline double metric_det(const MetricCoeffs& g) {
  return g.g_ss * g.g_tt - g.g_st * g.g_st;
}

inline double flux_s(const ImmersionEval& X, const ScalarField& f, double s,
                     double t, double h) {
  const MetricCoeffs g = induced_metric(X(s, t));
  const double det = metric_det(g);
  const double fs = (f(s + h, t) - f(s - h, t)) / (2.0 * h);
  const double ft = (f(s, t + h) - f(s, t - h)) / (2.0 * h);
  return std::sqrt(det) * (g.g_tt * fs - g.g_st * ft) / det;
}

inline double flux_t(const ImmersionEval& X, const ScalarField& f, double s,
                     double t, double h) {
  const MetricCoeffs g = induced_metric(X(s, t));
  const double det = metric_det(g);
  const double fs = (f(s + h, t) - f(s - h, t)) / (2.0 * h);
  const double ft = (f(s, t + h) - f(s, t - h)) / (2.0 * h);
  return std::sqrt(det) * (g.g_ss * ft - g.g_st * fs) / det;
}

}  // namespace detail

// Laplace-Beltrami operator of the immersion metric applied to a chart
// scalar, in divergence form with nested central differences.
inline double laplace_beltrami(const ImmersionEval& X, const ScalarField& f,
                               double s, double t, double h) {
  const double rt = std::sqrt(detail::metric_det(induced_metric(X(s, t))));
  const double div_s = (detail::flux_s(X, f, s + 0.5 * h, t, h) -
                        detail::flux_s(X, f, s - 0.5 * h, t, h)) /
                       h;
  const double div_t = (detail::flux_t(X, f, s, t + 0.5 * h, h) -
                        detail::flux_t(X, f, s, t - 0.5 * h, h)) /
                       h;
  return (div_s + div_t) / rt;
}

// Exponential chart of the real two sphere of radius R about its first
// axis point. Radial rays have unit speed, so chart norms agree with
// arc length norms on the sphere.
inline ImmersionEval sphere_disc(double R) {
  return ImmersionEval{[R](double u, double v) {
    LegendrianJet j;
    const double r = std::hypot(u, v);
    if (r < 1e-9) {
      j.X = Vec3c(R, 0.0, 0.0);
      j.X_s = Vec3c(0.0, 1.0, 0.0);
      j.X_t = Vec3c(0.0, 0.0, 1.0);
      return j;
    }
    const double a = r / R;
    const double ca = std::cos(a), sa = std::sin(a);
    const double snc = sa / a;
    const double uu = u / r, vv = v / r;
    j.X = Vec3c(R * ca, R * sa * uu, R * sa * vv);
    j.X_s = Vec3c(-sa * uu, ca * uu * uu + snc * vv * vv,
                  (ca - snc) * uu * vv);
    j.X_t = Vec3c(-sa * vv, (ca - snc) * uu * vv,
                  ca * vv * vv + snc * uu * uu);
    return j;
  }};
}

// Sup over interior disc samples of the defect of the linearization of
// the angle at phi in the direction varphi. Angles are differenced
// between the flows of phi and of phi plus varphi, and the linear term
// applies the Laplace-Beltrami operator of the unperturbed metric plus
// the curvature multiple 6 / R^2.
inline double linearization_residual(const ImmersionEval& X,
                                     const ScalarField& phi,
                                     const ScalarField& varphi, double R,
                                     PerturbOptions opt = {}) {
  opt.radius = R;
  ScalarField sum;
  sum.value = [phi, varphi](double s, double t) {
    return phi(s, t) + varphi(s, t);
  };
  const PerturbedImmersion at_phi = hamiltonian_perturb(X, phi, opt);
  const PerturbedImmersion at_sum = hamiltonian_perturb(X, sum, opt);
  const double lap_h = 2e-3;
  double worst = 0.0;
  const int n_ang = 8;
  for (int ir = 0; ir <= 4; ++ir) {
    const double rr = 0.12 * ir;
    const int na = ir == 0 ? 1 : n_ang;
    for (int ia = 0; ia < na; ++ia) {
      const double ang = 2.0 * M_PI * ia / n_ang;
      const double u = rr * std::cos(ang), v = rr * std::sin(ang);
      const double th1 = lagrangian_angle(at_sum.eval(u, v));
      const double th0 = lagrangian_angle(at_phi.eval(u, v));
      double dth = th1 - th0;
      while (dth > M_PI) dth -= 2.0 * M_PI;
      while (dth < -M_PI) dth += 2.0 * M_PI;
      const double lin =
          laplace_beltrami(X, varphi, u, v, lap_h) + 6.0 / (R * R) * varphi(u, v);
      worst = std::max(worst, std::fabs(dth - lin));
    }
  }
  return worst;
}

// The two kernel fields of the linearized operator restricted to the
// glued surface, normalized by the L2 norms of the generating quadratics
// over the unit two sphere. The norms are computed by quadrature on the
// colatitude-longitude grid.
struct KernelFunctions {
  double slide_norm = 0.0;
  double cross_norm = 0.0;
  ScalarField first;
  ScalarField second;
};

namespace detail {

inline double sphere_l2_norm(const KillingField& kf, int n_colat,
                             int n_lon) {
  double acc = 0.0;
  for (int i = 0; i < n_colat; ++i) {
    // Midpoint rule in the colatitude, trapezoid in the longitude; the
    // integrand is smooth and periodic in the longitude.
    const double phi = M_PI * (i + 0.5) / n_colat;
    double ring = 0.0;
    for (int k = 0; k < n_lon; ++k) {
      const double lam = 2.0 * M_PI * k / n_lon;
      const Vec3c x(std::cos(phi), std::sin(phi) * std::cos(lam),
                    std::sin(phi) * std::sin(lam));
      const double f = kf.value(x);
      ring += f * f;
    }
    acc += std::sin(phi) * ring * (2.0 * M_PI / n_lon) * (M_PI / n_colat);
  }
  return std::sqrt(acc);
}

}  // namespace detail

template <class Chart>
inline KernelFunctions normalized_kernel_functions(const Chart& chart,
                                                   int n_colat = 256,
                                                   int n_lon = 128) {
  KernelFunctions kf;
  const KillingField slide = killing_field(sliding_quadratic());
  const KillingField cross = killing_field(cross_quadratic());
  kf.slide_norm = detail::sphere_l2_norm(slide, n_colat, n_lon);
  kf.cross_norm = detail::sphere_l2_norm(cross, n_colat, n_lon);
  const double ns = kf.slide_norm, nc = kf.cross_norm;
  kf.first.value = [chart, slide, ns](double s, double t) {
    return slide.value(chart(s, t).X) / ns;
  };
  kf.second.value = [chart, cross, nc](double s, double t) {
    return cross.value(chart(s, t).X) / nc;
  };
  return kf;
}

}  // namespace sltk
