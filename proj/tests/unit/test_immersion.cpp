#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "sltk/elliptic.hpp"
#include "sltk/immersion.hpp"
#include "sltk/immersion_oracle.hpp"
#include "sltk/profile.hpp"
#include "sltk/symmetry.hpp"

namespace {

using sltk::LegendrianJet;
using sltk::TauParams;
using sltk::TorusImmersion;
using sltk::Vec3c;

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int j = 0; j < n; ++j) v[j] = lo + (hi - lo) * j / (n - 1.0);
  return v;
}

// Fourth-order central difference of a scalar function of t.
template <class F>
double fd_deriv(F&& f, double t, double h = 1e-3) {
  return (-f(t + 2.0 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2.0 * h)) /
         (12.0 * h);
}

}  // namespace

TEST_CASE("phases vanish at the origin and are odd") {
  for (double tau : {0.03, 0.11, sltk::kTauMax}) {
    const TorusImmersion ti = sltk::make_torus(sltk::solve_params(tau));
    CAPTURE(tau);
    CHECK(sltk::phase1(ti, 0.0) == 0.0);
    CHECK(sltk::phase2(ti, 0.0) == 0.0);
    for (double t : {0.2, 0.9, 1.7, 3.1}) {
      CHECK(std::fabs(sltk::phase1(ti, -t) + sltk::phase1(ti, t)) < 1e-12);
      CHECK(std::fabs(sltk::phase2(ti, -t) + sltk::phase2(ti, t)) < 1e-12);
    }
  }
}

TEST_CASE("phase derivatives solve the first order system") {
  for (double tau : {0.02, 0.08, 0.15}) {
    const TauParams p = sltk::solve_params(tau);
    const TorusImmersion ti = sltk::make_torus(p);
    CAPTURE(tau);
    for (double t : linspace(-1.8, 1.8, 13)) {
      const double y = sltk::conformal_factor(p, t);
      const double d1 =
          fd_deriv([&](double u) { return sltk::phase1(ti, u); }, t);
      const double d2 =
          fd_deriv([&](double u) { return sltk::phase2(ti, u); }, t);
      CHECK(std::fabs((1.0 - y) * d1 - 2.0 * tau) < 5e-8);
      CHECK(std::fabs(y * d2 + 2.0 * tau) < 5e-8);
    }
  }
}

TEST_CASE("phase combination locks to the conformal factor") {
  for (double tau : {0.01, 0.066, 0.12}) {
    const TauParams p = sltk::solve_params(tau);
    const TorusImmersion ti = sltk::make_torus(p);
    CAPTURE(tau);
    for (double t : linspace(-2.5, 2.5, 21)) {
      const double y = sltk::conformal_factor(p, t);
      const double lhs = y * std::sqrt(1.0 - y) *
                         std::cos(sltk::phase1(ti, t) + 2.0 * sltk::phase2(ti, t));
      CHECK(std::fabs(lhs - 2.0 * tau) < 1e-10);
    }
  }
}

TEST_CASE("phases accumulate the rotation period across half periods") {
  for (double tau : {0.04, 0.1, 0.16}) {
    const TauParams p = sltk::solve_params(tau);
    const TorusImmersion ti = sltk::make_torus(p);
    CAPTURE(tau);
    CHECK(std::fabs(sltk::phase1(ti, p.p_tau) - ti.p_hat) < 1e-10);
    CHECK(std::fabs(sltk::phase2(ti, p.p_tau) + 0.5 * ti.p_hat) < 1e-10);
    CHECK(std::fabs(sltk::phase2(ti, 2.0 * p.p_tau) + ti.p_hat) < 1e-10);
    CHECK(std::fabs(sltk::phase1(ti, p.p_tau) +
                    2.0 * sltk::phase2(ti, p.p_tau)) < 1e-10);
    // The half-period rotation angle through Heuman's lambda directly.
    const double sphi = std::sqrt(p.y_minus / (p.y_minus - p.y_min));
    const double lam = sltk::kPi * sltk::heuman_lambda0(std::asin(sphi),
                                                        p.modulus.k);
    CHECK(std::fabs(sltk::phase2(ti, 2.0 * p.p_tau) + lam) < 1e-8);
  }
}

TEST_CASE("zero tau keeps both phases zero") {
  const TorusImmersion ti = sltk::make_torus(sltk::solve_params(0.0));
  for (double t : {-3.0, -0.5, 0.0, 1.2, 7.0}) {
    CHECK(sltk::phase1(ti, t) == 0.0);
    CHECK(sltk::phase2(ti, t) == 0.0);
  }
}

TEST_CASE("phase table evaluates on the given grid monotonically") {
  const TauParams p = sltk::solve_params(0.07);
  const std::vector<double> grid = linspace(-1.4, 1.4, 29);
  const sltk::PhaseTable tab = sltk::phases(p, grid);
  REQUIRE(tab.t.size() == grid.size());
  REQUIRE(tab.psi1.size() == grid.size());
  REQUIRE(tab.psi2.size() == grid.size());
  const TorusImmersion ti = sltk::make_torus(p);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    CHECK(tab.psi1[j] == sltk::phase1(ti, grid[j]));
    CHECK(tab.psi2[j] == sltk::phase2(ti, grid[j]));
    if (j > 0) {
      CHECK(tab.psi1[j] > tab.psi1[j - 1]);
      CHECK(tab.psi2[j] < tab.psi2[j - 1]);
    }
  }
}

TEST_CASE("immersion jets satisfy sphere tangency and the contact condition") {
  for (double tau : {0.0, 0.02, 0.11, sltk::kTauMax}) {
    const TorusImmersion ti = sltk::make_torus(sltk::solve_params(tau));
    CAPTURE(tau);
    for (double t : linspace(-2.1, 2.1, 15)) {
      for (double s : linspace(0.0, 6.1, 7)) {
        const LegendrianJet j = sltk::immerse(ti, s, t);
        CHECK(sltk::sphere_residual(j) < 1e-12);
        CHECK(sltk::contact_residual(j) < 1e-12);
      }
    }
  }
}

TEST_CASE("immersion is conformal with factor the profile") {
  const TauParams p = sltk::solve_params(0.05);
  const TorusImmersion ti = sltk::make_torus(p);
  for (double t : linspace(-2.0, 2.0, 17)) {
    const double y = sltk::conformal_factor(p, t);
    for (double s : {0.4, 2.8, 5.0}) {
      const sltk::MetricCoeffs g = sltk::induced_metric(sltk::immerse(ti, s, t));
      CHECK(std::fabs(g.g_ss - y) < 1e-12);
      CHECK(std::fabs(g.g_tt - y) < 1e-12);
      CHECK(std::fabs(g.g_st) < 1e-12);
    }
  }
}

TEST_CASE("analytic tangents match finite differences") {
  for (double tau : {0.0, 0.09, 0.16}) {
    const TorusImmersion ti = sltk::make_torus(sltk::solve_params(tau));
    auto pos = [&](double s, double t) { return sltk::immerse(ti, s, t).X; };
    CAPTURE(tau);
    for (double t : {-1.3, 0.2, 0.8, 1.9}) {
      for (double s : {0.0, 1.1, 4.4}) {
        const LegendrianJet a = sltk::immerse(ti, s, t);
        const LegendrianJet b = sltk::oracle::jet_fd(pos, s, t);
        CHECK((a.X_s - b.X_s).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((a.X_t - b.X_t).cwiseAbs().maxCoeff() < 1e-9);
      }
    }
  }
}

TEST_CASE("round sphere branch is the real hyperbolic profile") {
  const TorusImmersion ti = sltk::make_torus(sltk::solve_params(0.0));
  const LegendrianJet j0 = sltk::immerse(ti, 0.0, 0.0);
  CHECK(std::abs(j0.X(0)) < 1e-15);
  CHECK(std::abs(j0.X(1) - 1.0) < 1e-15);
  CHECK(std::abs(j0.X(2)) < 1e-15);
  for (double t : {-1.5, 0.3, 2.0}) {
    for (double s : {0.7, 3.9}) {
      const LegendrianJet j = sltk::immerse(ti, s, t);
      CHECK(j.X.imag().cwiseAbs().maxCoeff() == 0.0);
      CHECK(std::fabs(sltk::lagrangian_angle(j)) < 1e-13);
      CHECK(std::abs(j.X(0) - std::tanh(t)) < 1e-15);
    }
  }
  CHECK(sltk::gauss_curvature(ti.params, 0.9) == 1.0);
}

TEST_CASE("axial frame fields generate the tangents") {
  for (double tau : {0.03, 0.13}) {
    const TorusImmersion ti = sltk::make_torus(sltk::solve_params(tau));
    CAPTURE(tau);
    for (double t : linspace(-1.6, 1.6, 9)) {
      for (double s : {0.2, 2.5, 4.9}) {
        const LegendrianJet j = sltk::immerse(ti, s, t);
        CHECK((j.X_s - sltk::oracle::frame_Xs(j.X)).cwiseAbs().maxCoeff() < 1e-15);
        CHECK((j.X_t - sltk::oracle::frame_Xt(j.X)).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }
}

TEST_CASE("closed form tracks the independent complex flow") {
  for (double tau : {0.05, 0.15}) {
    const TauParams p = sltk::solve_params(tau);
    const TorusImmersion ti = sltk::make_torus(p);
    const std::vector<double> grid = linspace(0.0, 2.0 * p.p_tau, 120);
    const auto w = sltk::oracle::w_ode_oracle(tau, grid);
    REQUIRE(w.size() == grid.size());
    CAPTURE(tau);
    double sup = 0.0, norm_drift = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const LegendrianJet jet = sltk::immerse(ti, 0.0, grid[j]);
      sup = std::max(sup, std::abs(jet.X(0) - w[j][0]));
      sup = std::max(sup, std::abs(jet.X(1) - w[j][1]));
      norm_drift = std::max(norm_drift, std::fabs(std::norm(w[j][0]) +
                                                  std::norm(w[j][1]) - 1.0));
    }
    CHECK(sup < 1e-8);
    CHECK(norm_drift < 1e-11);
  }

  // tau = 0 integrates the real profile.
  const std::vector<double> grid0 = linspace(0.0, 6.0, 60);
  const auto w0 = sltk::oracle::w_ode_oracle(0.0, grid0);
  double sup0 = 0.0;
  for (std::size_t j = 0; j < grid0.size(); ++j) {
    sup0 = std::max(sup0, std::abs(w0[j][0] - std::tanh(grid0[j])));
    sup0 = std::max(sup0, std::abs(w0[j][1] - 1.0 / std::cosh(grid0[j])));
  }
  CHECK(sup0 < 1e-8);
}

TEST_CASE("lagrangian angle vanishes along the family") {
  for (double tau : {0.01, 0.066, 0.13, sltk::kTauMax}) {
    const TorusImmersion ti = sltk::make_torus(sltk::solve_params(tau));
    CAPTURE(tau);
    double sup = 0.0;
    for (double t : linspace(-2.2, 2.2, 23))
      for (double s : linspace(0.0, 6.2, 9))
        sup = std::max(sup,
                       std::fabs(sltk::lagrangian_angle(sltk::immerse(ti, s, t))));
    CHECK(sup < 1e-10);
  }
}

TEST_CASE("special unitaries preserve the angle and phases shift it") {
  const TorusImmersion ti = sltk::make_torus(sltk::solve_params(0.09));
  LegendrianJet j = sltk::immerse(ti, 1.3, 0.6);

  LegendrianJet rotated = j;
  sltk::detail::apply_isometry(sltk::q_tilde(0.41), rotated);
  CHECK(std::fabs(sltk::lagrangian_angle(rotated)) < 1e-12);
  rotated = j;
  sltk::detail::apply_isometry(sltk::t_tilde(1.9), rotated);
  CHECK(std::fabs(sltk::lagrangian_angle(rotated)) < 1e-12);

  // A unit-modulus scaling of one coordinate has determinant e^{i phi} and
  // moves the angle by exactly phi.
  const double phi = 0.77;
  sltk::AmbientIsometry g;
  g.matrix = sltk::Mat3c::Identity();
  g.matrix(0, 0) = std::exp(std::complex<double>(0.0, phi));
  LegendrianJet scaled = j;
  sltk::detail::apply_isometry(g, scaled);
  CHECK(std::fabs(sltk::lagrangian_angle(scaled) - phi) < 1e-12);
}

TEST_CASE("degenerate frames are rejected") {
  LegendrianJet j;
  j.X = Vec3c(1.0, 0.0, 0.0);
  j.X_s = Vec3c(0.0, 1.0, 0.0);
  j.X_t = j.X_s;
  CHECK_THROWS_AS(sltk::lagrangian_angle(j), std::domain_error);
}

TEST_CASE("curvature formula matches the finite difference oracle") {
  for (double tau : {0.03, 0.1, 0.17}) {
    const TauParams p = sltk::solve_params(tau);
    CAPTURE(tau);
    for (double t : linspace(-2.3, 2.3, 21)) {
      CHECK(std::fabs(sltk::gauss_curvature(p, t) -
                      sltk::oracle::gauss_curvature_fd(p, t)) < 5e-7);
    }
  }
}

TEST_CASE("curvature is most negative at the waist and flat at the top") {
  const TauParams p = sltk::solve_params(0.05);
  const double at_waist = sltk::gauss_curvature(p, p.p_tau);
  CHECK(at_waist < 0.0);
  CHECK(sltk::gauss_curvature(p, 0.0) > 0.0);
  for (double t : linspace(0.0, p.p_tau, 40))
    CHECK(at_waist <= sltk::gauss_curvature(p, t) + 1e-14);

  const TauParams top = sltk::solve_params(sltk::kTauMax);
  for (double t : {0.0, 0.8, 2.2})
    CHECK(std::fabs(sltk::gauss_curvature(top, t)) < 1e-12);
}

TEST_CASE("rotation period routes agree and obey the small tau expansion") {
  for (double tau : {1e-4, 1e-3, 0.01, 0.1, 0.15}) {
    const TauParams p = sltk::solve_params(tau);
    CAPTURE(tau);
    CHECK(std::fabs(sltk::detail::rotation_period_closed(p) -
                    sltk::detail::rotation_period_quadrature(p)) < 1e-9);
  }
  for (double tau : {1e-4, 1e-3, 1e-2}) {
    const double phat = sltk::rotation_period(sltk::solve_params(tau));
    CAPTURE(tau);
    CHECK(std::fabs(phat - sltk::kHalfPi + tau * std::log(tau)) < tau);
  }
  // Derivative behaves like -log tau with a bounded correction.
  const double h = 1e-5;
  const double d = (sltk::rotation_period(sltk::solve_params(1e-3 + h)) -
                    sltk::rotation_period(sltk::solve_params(1e-3 - h))) /
                   (2.0 * h);
  CHECK(std::fabs(d + std::log(1e-3)) < 3.0);

  // Endpoint of the family, where the modulus degenerates.
  CHECK(std::fabs(sltk::rotation_period(sltk::solve_params(sltk::kTauMax)) -
                  sltk::kPi / std::sqrt(3.0)) < 1e-12);

  CHECK_THROWS_AS(sltk::rotation_period(sltk::solve_params(0.0)),
                  std::domain_error);
}

TEST_CASE("rotation period increases along the family") {
  double prev = 0.0;
  for (double tau : {1e-3, 0.02, 0.06, 0.1, 0.14, 0.18}) {
    const double phat = sltk::rotation_period(sltk::solve_params(tau));
    CHECK(phat > prev);
    prev = phat;
  }
  CHECK(prev < sltk::kPi / std::sqrt(3.0));
}

TEST_CASE("closing solver hits the target rotation and the frozen parameters") {
  const struct {
    int m_bar;
    double tau, p_tau;
  } frozen[] = {
      {2, 0.15987730426143693, 1.6527099484412366},
      {3, 0.066097152280325047, 2.0645017326798767},
      {4, 0.039652642394409347, 2.3130080115413656},
      {5, 0.027652061184088535, 2.4906136421576712},
  };
  for (const auto& row : frozen) {
    const TauParams p = sltk::closing_tau(row.m_bar);
    CAPTURE(row.m_bar);
    CHECK(std::fabs(p.tau - row.tau) < 1e-9 * row.tau);
    CHECK(std::fabs(p.p_tau - row.p_tau) < 1e-9 * row.p_tau);
    const int m = 4 * row.m_bar - 1;
    const double phat = sltk::rotation_period(p);
    CHECK(std::fabs(phat - sltk::kHalfPi * (1.0 + 1.0 / m)) < 1e-11);
    CHECK(std::fabs(m * phat - 2.0 * row.m_bar * sltk::kPi) < 1e-10);
  }
  CHECK_THROWS_AS(sltk::closing_tau(1), std::domain_error);
}

TEST_CASE("period lattice membership follows the parity rule") {
  const TauParams pb = sltk::closing_tau(3);
  const TorusImmersion ti = sltk::make_torus(pb);

  CHECK(sltk::period_lattice_member(ti, 0, 0));
  CHECK(sltk::period_lattice_member(ti, 2, 0));
  CHECK_FALSE(sltk::period_lattice_member(ti, 1, 0));
  for (long k2 = 1; k2 <= 10; ++k2) {
    CAPTURE(k2);
    CHECK_FALSE(sltk::period_lattice_member(ti, 0, k2));
  }
  CHECK(sltk::period_lattice_member(ti, 0, 11));
  CHECK(sltk::period_lattice_member(ti, 2, 11));
  CHECK_FALSE(sltk::period_lattice_member(ti, 1, 11));
  CHECK_FALSE(sltk::period_lattice_member(ti, 3, 11));

  // A generic parameter admits no small column.
  const TorusImmersion gen = sltk::make_torus(sltk::solve_params(0.11));
  CHECK_FALSE(sltk::period_lattice_member(gen, 0, 1));
  CHECK_FALSE(sltk::period_lattice_member(gen, 1, 1));
}

TEST_CASE("closing torus closes extensionally and no sooner") {
  const TauParams pb = sltk::closing_tau(3);
  const TorusImmersion ti = sltk::make_torus(pb);
  double member = 0.0;
  for (double t : linspace(-1.0, 1.0, 7)) {
    for (double s : linspace(0.0, 6.0, 7)) {
      const Vec3c a = sltk::immerse(ti, s, t + 22.0 * pb.p_tau).X;
      const Vec3c b = sltk::immerse(ti, s, t).X;
      member = std::max(member, (a - b).cwiseAbs().maxCoeff());
    }
  }
  CHECK(member < 1e-8);

  for (long k2 : {1L, 5L, 10L}) {
    double gap = 1e9;
    for (double t : linspace(-1.0, 1.0, 5)) {
      for (double s : linspace(0.0, 6.0, 5)) {
        const Vec3c a = sltk::immerse(ti, s, t + 2.0 * k2 * pb.p_tau).X;
        const Vec3c b = sltk::immerse(ti, s, t).X;
        gap = std::min(gap, (a - b).cwiseAbs().maxCoeff());
      }
    }
    CAPTURE(k2);
    CHECK(gap > 1e-3);
  }

  // The t-reflections about multiples of the half period collapse to the
  // basic one after a full closed period.
  const sltk::AmbientIsometry across = sltk::t_bar_tilde_x(11.0 * ti.p_hat);
  CHECK_FALSE(across.conjugate_first != sltk::t_bar_tilde().conjugate_first);
  CHECK((across.matrix - sltk::t_bar_tilde().matrix).cwiseAbs().maxCoeff() <
        1e-9);
}

TEST_CASE("special legendrian certificate on the reference grid") {
  const TauParams pb = sltk::closing_tau(3);
  const TorusImmersion ti = sltk::make_torus(pb);
  double contact = 0.0, angle = 0.0, conformal = 0.0;
  const std::vector<double> s_grid = linspace(0.0, 2.0 * sltk::kPi, 256);
  const std::vector<double> t_grid = linspace(-pb.p_tau, pb.p_tau, 2048);
  for (double t : t_grid) {
    for (double s : s_grid) {
      const LegendrianJet j = sltk::immerse(ti, s, t);
      contact = std::max(contact, sltk::contact_residual(j));
      angle = std::max(angle, std::fabs(sltk::lagrangian_angle(j)));
      const sltk::MetricCoeffs g = sltk::induced_metric(j);
      conformal = std::max(conformal, std::fabs(g.g_st));
      conformal = std::max(conformal, std::fabs(g.g_ss - g.g_tt));
    }
  }
  CHECK(contact < 1e-8);
  CHECK(angle < 1e-8);
  CHECK(conformal < 1e-9);
}

TEST_CASE("twisting by zero reproduces the torus") {
  const TauParams pb = sltk::closing_tau(3);
  const sltk::TwistedImmersion tw = sltk::make_twisted(pb, 0.0);
  double pos = 0.0, tan = 0.0;
  for (double t : linspace(-2.2, 2.2, 45)) {
    for (double s : linspace(0.0, 6.2, 9)) {
      const LegendrianJet a = sltk::twisted_immerse(tw, s, t);
      const LegendrianJet b = sltk::immerse(tw.base, s, t);
      pos = std::max(pos, (a.X - b.X).cwiseAbs().maxCoeff());
      tan = std::max(tan, (a.X_t - b.X_t).cwiseAbs().maxCoeff());
      tan = std::max(tan, (a.X_s - b.X_s).cwiseAbs().maxCoeff());
    }
  }
  CHECK(pos < 1e-12);
  CHECK(tan < 1e-8);
}

TEST_CASE("twisted surface stays legendrian through the join") {
  const TauParams pb = sltk::closing_tau(3);
  for (double alpha : {1.0 / 320.0, 1.0 / 80.0}) {
    const sltk::TwistedImmersion tw = sltk::make_twisted(pb, alpha);
    CAPTURE(alpha);
    double contact = 0.0, sphere = 0.0;
    for (double t : linspace(1.3, 1.75, 31)) {
      for (double s : linspace(0.0, 6.2, 13)) {
        const LegendrianJet j = sltk::twisted_immerse(tw, s, t);
        contact = std::max(contact, sltk::contact_residual(j));
        sphere = std::max(sphere, sltk::sphere_residual(j));
      }
    }
    CHECK(contact < 1e-8);
    CHECK(sphere < 1e-8);
  }
}

TEST_CASE("twisted surface matches rotated tori outside the window") {
  const TauParams pb = sltk::closing_tau(3);
  const double p = pb.p_tau;
  const double alpha = 0.05;
  const sltk::TwistedImmersion tw = sltk::make_twisted(pb, alpha);
  const sltk::AmbientIsometry qm = sltk::q_tilde(-alpha);

  // Untwisted core.
  double core = 0.0;
  for (double t : linspace(-1.0, 1.0, 9))
    for (double s : linspace(0.0, 6.2, 7))
      core = std::max(core, (sltk::twisted_immerse(tw, s, t).X -
                             sltk::immerse(tw.base, s, t).X)
                                .cwiseAbs()
                                .maxCoeff());
  CHECK(core < 1e-13);

  // Fully twisted band, including the piece past the strip boundary.
  double band = 0.0;
  for (double t : linspace(2.0, 2.0 * p - 2.0, 41))
    for (double s : linspace(0.0, 6.2, 7))
      band = std::max(band, (qm(sltk::twisted_immerse(tw, s, t).X) -
                             sltk::immerse(tw.base, s, t).X)
                                .cwiseAbs()
                                .maxCoeff());
  CHECK(band < 1e-9);

  // Reflected side carries the opposite twist.
  const sltk::AmbientIsometry qp = sltk::q_tilde(alpha);
  double refl = 0.0;
  for (double t : linspace(-p + 0.01, -2.0, 17))
    for (double s : linspace(0.0, 6.2, 7))
      refl = std::max(refl, (qp(sltk::twisted_immerse(tw, s, t).X) -
                             sltk::immerse(tw.base, s, t).X)
                                .cwiseAbs()
                                .maxCoeff());
  CHECK(refl < 1e-13);
}

TEST_CASE("twisted symmetry list holds on the grid") {
  const TauParams pb = sltk::closing_tau(3);
  const double p = pb.p_tau;
  const double alpha = 0.05;
  const sltk::TwistedImmersion tw = sltk::make_twisted(pb, alpha);
  auto X = [&](double s, double t) { return sltk::twisted_immerse(tw, s, t).X; };
  const std::vector<double> s_grid = linspace(0.0, 2.0 * sltk::kPi, 9);
  const std::vector<double> t_grid = linspace(-2.4, 2.4, 17);
  const sltk::AmbientIsometry period = sltk::compose(
      sltk::t_tilde(2.0 * tw.base.p_hat), sltk::q_tilde(2.0 * alpha));

  CHECK(sltk::equivariance_defect(X, sltk::t_bar_tilde(),
                                  sltk::cyl_t_reflect(), s_grid,
                                  t_grid) < 1e-8);
  CHECK(sltk::equivariance_defect(X, sltk::s_bar_tilde(),
                                  sltk::cyl_s_reflect(), s_grid,
                                  t_grid) < 1e-8);
  CHECK(sltk::equivariance_defect(X, sltk::s_pi_tilde(), sltk::cyl_s_pi(),
                                  s_grid, t_grid) < 1e-8);
  CHECK(sltk::equivariance_defect(X, period, sltk::cyl_translate(2.0 * p),
                                  s_grid, t_grid) < 1e-8);
  CHECK(sltk::equivariance_defect(X, sltk::compose(period, period),
                                  sltk::cyl_translate(4.0 * p), s_grid,
                                  t_grid) < 1e-8);
  CHECK(sltk::equivariance_defect(X, sltk::compose(period, sltk::t_bar_tilde()),
                                  sltk::cyl_t_reflect_about(p), s_grid,
                                  t_grid) < 1e-8);

  // The continuous rotation is broken by the twist; only the half turn
  // survives. A coarse grid suffices to see the obstruction.
  const double broken = sltk::equivariance_defect(
      X, sltk::s_tilde(0.7), sltk::cyl_rotate(0.7), linspace(0.0, 6.0, 5),
      linspace(1.3, 1.7, 5));
  CHECK(broken > 1e-3);
}

TEST_CASE("twisting angle scales linearly in the twist") {
  const TauParams pb = sltk::closing_tau(3);
  std::vector<double> ratios;
  for (double alpha : {1.0 / 320.0, 1.0 / 160.0, 1.0 / 80.0}) {
    const sltk::TwistedImmersion tw = sltk::make_twisted(pb, alpha);
    double sup = 0.0;
    for (double t : linspace(1.3, 1.75, 91))
      for (double s : linspace(0.0, 2.0 * sltk::kPi, 25))
        sup = std::max(sup, std::fabs(sltk::lagrangian_angle(
                                sltk::twisted_immerse(tw, s, t))));
    CAPTURE(alpha);
    CHECK(sup / alpha > 30.0);
    CHECK(sup / alpha < 55.0);
    ratios.push_back(sup / alpha);
  }
  const double lo = std::min({ratios[0], ratios[1], ratios[2]});
  const double hi = std::max({ratios[0], ratios[1], ratios[2]});
  CHECK(hi / lo < 1.25);
}

TEST_CASE("twist construction rejects out of range parameters") {
  CHECK_THROWS_AS(sltk::make_twisted(sltk::solve_params(0.17), 0.1),
                  std::domain_error);
  CHECK_THROWS_AS(sltk::make_twisted(sltk::closing_tau(3), 0.6),
                  std::domain_error);
}

TEST_CASE("reparametrized immersion rescales the period") {
  const TauParams pb = sltk::closing_tau(3);
  const double p = pb.p_tau;
  const sltk::TwistedImmersion tw = sltk::make_twisted(pb, 0.03);

  for (double t : {-1.1, 0.4, 1.9}) {
    const LegendrianJet a = sltk::reparametrized_immerse(tw, 0.5 * p, 0.9, t);
    const LegendrianJet b = sltk::twisted_immerse(tw, 0.9, 2.0 * t);
    CHECK((a.X - b.X).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((a.X_t - 2.0 * b.X_t).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((a.X_s - b.X_s).cwiseAbs().maxCoeff() < 1e-14);
  }

  // With the native period and no twist this is the torus again.
  const sltk::TwistedImmersion plain = sltk::make_twisted(pb, 0.0);
  for (double t : {-0.7, 0.6}) {
    const LegendrianJet a = sltk::reparametrized_immerse(plain, p, 2.0, t);
    const LegendrianJet b = sltk::immerse(plain.base, 2.0, t);
    CHECK((a.X - b.X).cwiseAbs().maxCoeff() < 1e-12);
  }

  CHECK_THROWS_AS(sltk::reparametrized_immerse(tw, 0.0, 0.0, 0.0),
                  std::domain_error);
}

TEST_CASE("sliding and twisting keep the conjugated reflection") {
  const TauParams pb = sltk::closing_tau(3);
  const double p_bar = pb.p_tau;
  const int m = 11;
  const double alpha = 0.07;
  const TauParams ps = sltk::solve_params(1.02 * pb.tau);
  const sltk::TwistedImmersion tw = sltk::make_twisted(ps, alpha);
  auto Xu = [&](double s, double t) {
    return sltk::reparametrized_immerse(tw, p_bar, s, t).X;
  };
  const std::vector<double> s_grid = linspace(0.0, 2.0 * sltk::kPi, 9);

  // Fundamental period in the rescaled parameter.
  const sltk::AmbientIsometry period = sltk::compose(
      sltk::t_tilde(2.0 * tw.base.p_hat), sltk::q_tilde(2.0 * alpha));
  CHECK(sltk::equivariance_defect(Xu, period, sltk::cyl_translate(2.0 * p_bar),
                                  s_grid, linspace(-1.5, 1.5, 9)) < 1e-9);

  // Reflection about t = m p_bar after sliding tau off the closing value,
  // conjugated by the compensating translation and twist.
  const double zeta1 = m * (sltk::make_torus(pb).p_hat - tw.base.p_hat);
  const double zeta2 = (1.0 - m) * alpha;
  const sltk::AmbientIsometry A =
      sltk::compose(sltk::t_tilde(zeta1), sltk::q_tilde(zeta2 - alpha));
  const sltk::AmbientIsometry lhs_iso = sltk::compose(sltk::t_bar_tilde(), A);
  double sup = 0.0;
  for (double s : s_grid) {
    for (double t : linspace(m * p_bar - 1.5, m * p_bar + 1.5, 9)) {
      const Vec3c lhs = lhs_iso(Xu(s, t));
      const Vec3c rhs = A(Xu(s, 2.0 * m * p_bar - t));
      sup = std::max(sup, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  }
  CHECK(sup < 1e-8);

  // The compensation is essential: dropping it breaks the identity.
  const sltk::AmbientIsometry bare = sltk::t_bar_tilde();
  double broken = 0.0;
  for (double s : {0.0, 2.1}) {
    for (double t : {m * p_bar - 0.9, m * p_bar + 0.6}) {
      const Vec3c lhs = bare(Xu(s, t));
      const Vec3c rhs = Xu(s, 2.0 * m * p_bar - t);
      broken = std::max(broken, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  }
  CHECK(broken > 1e-3);
}

TEST_CASE("point cloud export covers the grid") {
  const TorusImmersion ti = sltk::make_torus(sltk::solve_params(0.08));
  auto X = [&](double s, double t) { return sltk::immerse(ti, s, t).X; };
  const std::string csv = sltk::point_cloud_csv(X, 4, 3, -1.0, 1.0);
  CHECK(csv.rfind("s,t,re1,im1,re2,im2,re3,im3\n", 0) == 0);
  std::size_t rows = 0;
  for (char c : csv)
    if (c == '\n') ++rows;
  CHECK(rows == 1 + 4 * 3);

  // First data row is the s = 0, t = -1 sample.
  const std::size_t head = csv.find('\n') + 1;
  double s0, t0, re1, im1;
  REQUIRE(std::sscanf(csv.c_str() + head, "%lf,%lf,%lf,%lf", &s0, &t0, &re1,
                      &im1) == 4);
  CHECK(s0 == 0.0);
  CHECK(t0 == -1.0);
  const Vec3c first = X(0.0, -1.0);
  CHECK(std::fabs(re1 - first(0).real()) < 1e-16);
  CHECK(std::fabs(im1 - first(0).imag()) < 1e-16);
}
