#include <cstdio>
#include <cmath>

#include "sltk/immersion.hpp"
#include "sltk/perturb.hpp"
#include "sltk/surface.hpp"

using namespace sltk;

static double wrap_pi(double x) {
  while (x > M_PI) x -= 2.0 * M_PI;
  while (x < -M_PI) x += 2.0 * M_PI;
  return x;
}

int main() {
  // 1. Killing flows against the closed form isometry families.
  {
    const KillingField kt = killing_field(sliding_quadratic());
    const KillingField kq = killing_field(twisting_quadratic());
    double worst_t = 0.0, worst_q = 0.0;
    for (double x : {0.3, 1.0, 2.7, -1.4}) {
      worst_t = std::max(worst_t,
                         (kt.flow(x).matrix - t_tilde(x).matrix).cwiseAbs().maxCoeff());
      worst_q = std::max(worst_q,
                         (kq.flow(x).matrix - q_tilde(x).matrix).cwiseAbs().maxCoeff());
    }
    std::printf("[1] flow vs t_tilde %.3e, vs q_tilde %.3e\n", worst_t, worst_q);
    // field consistency: finite difference of the flow
    const Vec3c z(std::complex<double>(0.3, 0.1), std::complex<double>(0.5, -0.2),
                  std::complex<double>(0.4, 0.6));
    const double h = 1e-6;
    const Vec3c fd = (kt.flow(h)(z) - kt.flow(-h)(z)) / (2.0 * h);
    std::printf("    field vs flow derivative %.3e\n",
                (fd - kt.field(z)).cwiseAbs().maxCoeff());
  }

  // 2. Discrete (Lap_g + 6) annihilates the sliding potential on the torus.
  {
    const TauParams tp = closing_tau(3);
    const TorusImmersion ti = make_torus(tp);
    const KillingField kt = killing_field(sliding_quadratic());
    auto f_of_t = [&](double t) { return kt.value(immerse(ti, 0.3, t).X); };
    for (double h : {1e-2, 5e-3, 2.5e-3}) {
      double worst = 0.0;
      for (int i = 0; i <= 40; ++i) {
        const double t = -2.0 + 4.0 * i / 40.0;
        const double y = conformal_factor(tp, t);
        const double lap = (f_of_t(t + h) - 2.0 * f_of_t(t) + f_of_t(t - h)) /
                           (h * h) / y;
        worst = std::max(worst, std::fabs(lap + 6.0 * f_of_t(t)));
      }
      std::printf("[2] h=%.1e residual %.6e\n", h, worst);
    }
  }

  // 3. Zero field flows to the identity.
  {
    ScalarField zero;
    zero.value = [](double, double) { return 0.0; };
    const ImmersionEval X = sphere_disc(1.0);
    const PerturbedImmersion P = hamiltonian_perturb(X, zero, 16);
    double worst = 0.0;
    for (double u : {-0.4, 0.0, 0.3})
      for (double v : {-0.2, 0.25})
        worst = std::max(worst, (P.position(u, v) - X(u, v).X).cwiseAbs().maxCoeff());
    std::printf("[3] zero field identity %.3e\n", worst);
  }

  // 4. Sliding potential flow against the sliding isometry, second order.
  {
    const ImmersionEval X = sphere_disc(1.0);
    const KillingField kt = killing_field(sliding_quadratic());
    for (double eps : {1e-2, 1e-3}) {
      ScalarField f;
      f.value = [&X, kt, eps](double u, double v) {
        return eps * kt.value(X(u, v).X);
      };
      const PerturbedImmersion P = hamiltonian_perturb(X, f, 16);
      const AmbientIsometry g = t_tilde(eps);
      double worst = 0.0;
      for (double u : {-0.4, 0.0, 0.35})
        for (double v : {-0.3, 0.2})
          worst = std::max(worst, (P.position(u, v) - g(X(u, v).X)).cwiseAbs().maxCoeff());
      std::printf("[4] eps=%.0e congruence %.6e  (over eps^2 %.3f)\n", eps,
                  worst, worst / (eps * eps));
    }
  }

  // 5. Defect of the perturbed jets for a small bump.
  {
    const ImmersionEval X = sphere_disc(1.0);
    ScalarField f;
    f.value = [](double u, double v) {
      return 1e-3 * std::exp(-((u - 0.05) * (u - 0.05) + v * v) / 0.5);
    };
    const PerturbedImmersion P = hamiltonian_perturb(X, f, 16);
    double worst_c = 0.0, worst_s = 0.0;
    for (double u : {-0.35, 0.0, 0.3})
      for (double v : {-0.25, 0.15}) {
        const LegendrianJet j = P.eval(u, v);
        worst_c = std::max(worst_c, contact_residual(j));
        worst_s = std::max(worst_s, std::fabs(j.X.norm() - 1.0));
      }
    std::printf("[5] contact %.3e sphere %.3e drift max %.3e first %.3e\n",
                worst_c, worst_s, P.diagnostics->max_drift,
                P.diagnostics->first_drift);
  }

  // 6. Drift order in the substep count.
  {
    const ImmersionEval X = sphere_disc(1.0);
    ScalarField f;
    f.value = [](double u, double v) {
      return 1e-2 * std::exp(-((u - 0.05) * (u - 0.05) + v * v) / 0.5);
    };
    for (int steps : {8, 16, 32}) {
      const PerturbedImmersion P = hamiltonian_perturb(X, f, steps);
      for (double u : {-0.35, 0.0, 0.3})
        for (double v : {-0.25, 0.15}) P.position(u, v);
      std::printf("[6] steps=%2d max_drift %.6e first_drift %.6e\n", steps,
                  P.diagnostics->max_drift, P.diagnostics->first_drift);
    }
  }

  // 7. Linearization slope.
  {
    const ImmersionEval X = sphere_disc(1.0);
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      ScalarField phi, varphi;
      phi.value = [eps](double u, double v) {
        return eps * std::exp(-((u - 0.1) * (u - 0.1) + v * v) / 0.5);
      };
      varphi.value = [eps](double u, double v) {
        return eps * std::exp(-(u * u + (v + 0.1) * (v + 0.1)) / 0.6);
      };
      const double r = linearization_residual(X, phi, varphi, 1.0);
      std::printf("[7] eps=%.0e residual %.6e  (over eps^2 %.3f)\n", eps, r,
                  r / (eps * eps));
    }
    // zero direction
    ScalarField phi, zero;
    phi.value = [](double u, double v) {
      return 1e-2 * std::exp(-(u * u + v * v) / 0.5);
    };
    zero.value = [](double, double) { return 0.0; };
    std::printf("[7] zero direction residual %.3e\n",
                linearization_residual(X, phi, zero, 1.0));
    // large radius: curvature term negligible, plain Laplacian
    {
      const double R = 1000.0;
      const ImmersionEval XR = sphere_disc(R);
      ScalarField phiR, varphiR;
      phiR.value = [](double u, double v) {
        return 1e-3 * std::exp(-((u - 0.1) * (u - 0.1) + v * v) / 0.5);
      };
      varphiR.value = [](double u, double v) {
        return 1e-3 * std::exp(-(u * u + (v + 0.1) * (v + 0.1)) / 0.6);
      };
      std::printf("[7] R=1000 residual %.6e\n",
                  linearization_residual(XR, phiR, varphiR, R));
    }
  }

  // 8. Sphere L2 normalizers against the closed forms.
  {
    const KillingField slide = killing_field(sliding_quadratic());
    const KillingField cross = killing_field(cross_quadratic());
    const double n1 = detail::sphere_l2_norm(slide, 256, 128);
    const double n2 = detail::sphere_l2_norm(cross, 256, 128);
    const double n1b = detail::sphere_l2_norm(slide, 384, 192);
    const double n2b = detail::sphere_l2_norm(cross, 384, 192);
    std::printf("[8] slide %.15f vs %.15f diff %.3e stab %.3e\n", n1,
                std::sqrt(M_PI / 5.0), std::fabs(n1 - std::sqrt(M_PI / 5.0)),
                std::fabs(n1 - n1b));
    std::printf("[8] cross %.15f vs %.15f diff %.3e stab %.3e\n", n2,
                2.0 * std::sqrt(M_PI / 15.0),
                std::fabs(n2 - 2.0 * std::sqrt(M_PI / 15.0)),
                std::fabs(n2 - n2b));
  }

  // 9. Kernel fields on the glued surface: closed forms and symmetries.
  {
    const SurfaceModel M = make_surface_model(3, 3);
    const GluedImmersion G = make_glued(M, 0.0, 0.0);
    auto chart = [G](double s, double t) { return glued_chart(G, s, t); };
    const KernelFunctions kf = normalized_kernel_functions(chart);
    // sphere side closed forms
    double w1 = 0.0, w2 = 0.0;
    for (double t : {0.6, 1.2, 2.0}) {
      for (double s : {0.2, 1.1, 2.9}) {
        const double se = 1.0 / std::cosh(t);
        const double f1 = (-0.5 + 0.75 * se * se) / kf.slide_norm;
        w1 = std::max(w1, std::fabs(kf.first(s, t) - f1));
      }
    }
    std::printf("[9] sphere side slide field vs sech form %.3e\n", w1);
    // torus side closed forms
    const double c = G.tau.p_tau / M.p_bar;
    for (double t : {M.layout.b + 0.3, M.p_bar, M.half_t}) {
      for (double s : {0.2, 1.1}) {
        const double y = conformal_factor(G.tau, c * t);
        const double f1 = (-0.5 + 0.75 * y) / kf.slide_norm;
        const double f2 = (-0.5 * y * std::cos(2.0 * s)) / kf.cross_norm;
        w1 = std::max(w1, std::fabs(kf.first(s, t) - f1));
        w2 = std::max(w2, std::fabs(kf.second(s, t) - f2));
      }
    }
    std::printf("[9] torus side slide %.3e cross %.3e\n", w1, w2);
    // symmetries
    double ws = 0.0, wt = 0.0;
    for (double t : {0.8, 3.0, M.half_t - 0.4}) {
      for (double s : {0.3, 2.1}) {
        ws = std::max(ws, std::fabs(kf.first(s + M_PI, t) - kf.first(s, t)));
        ws = std::max(ws, std::fabs(kf.second(s + M_PI, t) - kf.second(s, t)));
        wt = std::max(wt,
                      std::fabs(kf.first(s, 2.0 * M.half_t - t) - kf.first(s, t)));
        wt = std::max(wt,
                      std::fabs(kf.second(s, 2.0 * M.half_t - t) - kf.second(s, t)));
      }
    }
    std::printf("[9] s+pi invariance %.3e waist reflection %.3e\n", ws, wt);
  }

  // 10. Tube failure throws.
  {
    const ImmersionEval X = sphere_disc(1.0);
    ScalarField f;
    f.value = [](double, double) { return 0.6; };
    try {
      const PerturbedImmersion P = hamiltonian_perturb(X, f, 16);
      P.position(0.1, 0.2);
      std::printf("[10] no throw (unexpected)\n");
    } catch (const std::runtime_error& e) {
      std::printf("[10] threw: %s\n", e.what());
    }
  }

  // 11. Symmetry transport of the flow on the glued chart.
  {
    const SurfaceModel M = make_surface_model(3, 3);
    const GluedImmersion G = make_glued(M, 0.0, 0.0);
    const ImmersionEval X{[G](double s, double t) { return glued_chart(G, s, t); }};
    const KillingField slide = killing_field(sliding_quadratic());
    ScalarField f;
    f.value = [X, slide](double s, double t) {
      return 1e-4 * slide.value(X(s, t).X);
    };
    const PerturbedImmersion P = hamiltonian_perturb(X, f, 16);
    const AmbientIsometry sp = s_pi_tilde(), tb = t_bar_tilde();
    double wsp = 0.0, wtb = 0.0;
    for (double t : {1.0, 3.2, M.half_t - 0.6}) {
      for (double s : {0.4, 1.9}) {
        const Vec3c p = P.position(s, t);
        wsp = std::max(wsp, (P.position(s + M_PI, t) - sp(p)).cwiseAbs().maxCoeff());
        wtb = std::max(wtb,
                       (P.position(s, 2.0 * M.half_t - t) - tb(p)).cwiseAbs().maxCoeff());
      }
    }
    std::printf("[11] transport s_pi %.3e t_bar %.3e\n", wsp, wtb);
  }

  // 12. Interpolated field reproduces bilinear data.
  {
    std::vector<std::vector<double>> rows(5, std::vector<double>(7));
    for (int j = 0; j < 5; ++j)
      for (int i = 0; i < 7; ++i) rows[j][i] = 2.0 + 0.3 * i - 0.7 * j + 0.11 * i * j;
    const ScalarField f = bilinear_field(-1.0, 0.5, 0.25, 0.4, rows);
    double worst = 0.0;
    for (double s : {-0.9, -0.3, 0.37})
      for (double t : {0.6, 1.3, 2.0}) {
        const double x = (s + 1.0) / 0.25, y = (t - 0.5) / 0.4;
        const double want = 2.0 + 0.3 * x - 0.7 * y + 0.11 * x * y;
        worst = std::max(worst, std::fabs(f(s, t) - want));
      }
    std::printf("[12] bilinear reproduction %.3e\n", worst);
  }

  (void)wrap_pi;
  return 0;
}
