#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "sltk/profile.hpp"
#include "sltk/profile_oracle.hpp"

namespace {

double cubic(double y, double tau) {
  return y * y * y - y * y + 4.0 * tau * tau;
}

// Independent bracketing root finder used to confirm y_min examples.
double bisect_ymin(double tau) {
  double lo = 0.0, hi = 0.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cubic(mid, tau) >= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("cubic roots are ordered, exact, and satisfy Vieta") {
  for (double tau : {1.0e-6, 1.0e-4, 0.01, 0.05, 0.1, 0.15, 0.19}) {
    const sltk::TauParams p = sltk::solve_params(tau);
    CAPTURE(tau);
    CHECK(p.y_minus <= 0.0);
    CHECK(p.y_min >= 0.0);
    CHECK(p.y_min <= p.y_max);
    CHECK(std::fabs(cubic(p.y_minus, tau)) < 1.0e-12);
    CHECK(std::fabs(cubic(p.y_min, tau)) < 1.0e-12);
    CHECK(std::fabs(cubic(p.y_max, tau)) < 1.0e-12);
    CHECK(std::fabs(p.y_minus + p.y_min + p.y_max - 1.0) < 1.0e-12);
    CHECK(std::fabs(p.y_minus * p.y_min * p.y_max + 4.0 * tau * tau) <
          1.0e-12);
    CHECK(std::fabs(p.r - std::sqrt(p.y_max - p.y_minus)) < 1.0e-14);
    const double k2 = (p.y_max - p.y_min) / (p.y_max - p.y_minus);
    CHECK(std::fabs(p.modulus.k * p.modulus.k - k2) < 1.0e-13);
  }
}

TEST_CASE("endpoint parameter sets take their dedicated branches") {
  const sltk::TauParams p0 = sltk::solve_params(0.0);
  CHECK(p0.y_minus == 0.0);
  CHECK(p0.y_min == 0.0);
  CHECK(p0.y_max == 1.0);
  CHECK(p0.modulus.k == 1.0);
  CHECK(std::isinf(p0.p_tau));

  const sltk::TauParams pt = sltk::solve_params(sltk::kTauMax);
  CHECK(pt.y_minus == -1.0 / 3.0);
  CHECK(pt.y_min == 2.0 / 3.0);
  CHECK(pt.y_max == 2.0 / 3.0);
  CHECK(pt.modulus.k == 0.0);
  CHECK(std::fabs(pt.p_tau - sltk::kHalfPi) < 1.0e-15);
}

TEST_CASE("ymin parametrization inverts solve_params") {
  CHECK(sltk::ymin_to_tau(0.0) == 0.0);
  CHECK(std::fabs(sltk::ymin_to_tau(2.0 / 3.0) - sltk::kTauMax) < 1.0e-15);
  CHECK(std::fabs(sltk::ymin_to_tau(0.1) - 0.05 * std::sqrt(0.9)) < 1.0e-16);
  for (double y : {0.01, 0.1, 0.3, 0.5, 0.6}) {
    const double tau = sltk::ymin_to_tau(y);
    CHECK(std::fabs(sltk::solve_params(tau).y_min - y) < 1.0e-10);
  }
}

TEST_CASE("small-tau y_min approaches 2 tau, bracket-confirmed") {
  const double tau = 0.05;
  const sltk::TauParams p = sltk::solve_params(tau);
  const double y_bisect = bisect_ymin(tau);
  CHECK(std::fabs(p.y_min - y_bisect) < 1.0e-12);
  CHECK(std::fabs(p.y_min - 2.0 * tau) < 4.0 * tau * tau);
}

TEST_CASE("closed form hits its endpoints, parity, and period") {
  for (double tau : {0.01, 0.08, 0.17}) {
    const sltk::TauParams p = sltk::solve_params(tau);
    CHECK(std::fabs(sltk::conformal_factor(p, 0.0) - p.y_max) < 1.0e-15);
    CHECK(std::fabs(sltk::conformal_factor(p, p.p_tau) - p.y_min) < 1.0e-12);
    for (double t : {0.3, 1.1, 2.4, 7.9}) {
      const double y = sltk::conformal_factor(p, t);
      CHECK(y >= p.y_min - 1.0e-14);
      CHECK(y <= p.y_max + 1.0e-14);
      CHECK(sltk::conformal_factor(p, -t) == y);  // even by construction
      CHECK(std::fabs(sltk::conformal_factor(p, t + 2.0 * p.p_tau) - y) <
            1.0e-10);
    }
  }
  // tau = 0 degenerates to sech^2.
  const sltk::TauParams p0 = sltk::solve_params(0.0);
  for (double t : {0.0, 0.7, 2.2, 5.0}) {
    const double s = 1.0 / std::cosh(t);
    CHECK(std::fabs(sltk::conformal_factor(p0, t) - s * s) < 1.0e-15);
  }
  // Top endpoint is the constant 2/3.
  const sltk::TauParams pt = sltk::solve_params(sltk::kTauMax);
  CHECK(sltk::conformal_factor(pt, 1.234) == 2.0 / 3.0);
}

TEST_CASE("first integral and derivative identities") {
  for (double tau : {0.01, 0.05, 0.12}) {
    const sltk::TauParams p = sltk::solve_params(tau);
    for (int i = 0; i <= 40; ++i) {
      const double t = 2.0 * p.p_tau * i / 40.0;
      const double y = sltk::conformal_factor(p, t);
      const double yd = sltk::conformal_factor_dot(p, t);
      // Analytic derivative against the first integral, tight.
      CHECK(std::fabs(yd * yd + 4.0 * cubic(y, tau)) < 1.0e-12);
      // Analytic derivative against central differences.
      const double h = 1.0e-5;
      const double fd = (sltk::conformal_factor(p, t + h) -
                         sltk::conformal_factor(p, t - h)) /
                        (2.0 * h);
      CHECK(std::fabs(yd - fd) < 1.0e-8);
      // Oscillator identity for the second derivative; wider step since
      // the second difference amplifies roundoff by 1/h^2.
      const double h2 = 1.0e-4;
      const double fdd = (sltk::conformal_factor(p, t + h2) - 2.0 * y +
                          sltk::conformal_factor(p, t - h2)) /
                         (h2 * h2);
      CHECK(std::fabs(sltk::conformal_factor_ddot(p, t) - fdd) < 1.0e-5);
    }
  }
}

TEST_CASE("closed form agrees with the ODE oracle") {
  for (double tau : {0.1, 0.01, 0.001}) {
    const sltk::TauParams p = sltk::solve_params(tau);
    std::vector<double> grid;
    for (int i = 0; i <= 200; ++i)
      grid.push_back(2.0 * p.p_tau * i / 200.0);
    const std::vector<double> ode =
        sltk::oracle::conformal_factor_ode_oracle(tau, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      worst = std::max(worst,
                       std::fabs(sltk::conformal_factor(p, grid[i]) - ode[i]));
    CAPTURE(tau, worst);
    CHECK(worst < 1.0e-8);
  }
  // tau = 0 against the known sech^2 solution.
  std::vector<double> grid0;
  for (int i = 0; i <= 100; ++i) grid0.push_back(5.0 * i / 100.0);
  const std::vector<double> ode0 =
      sltk::oracle::conformal_factor_ode_oracle(0.0, grid0);
  for (std::size_t i = 0; i < grid0.size(); ++i) {
    const double s = 1.0 / std::cosh(grid0[i]);
    CHECK(std::fabs(ode0[i] - s * s) < 1.0e-9);
  }
  // Top endpoint stays at the constant solution.
  const std::vector<double> odet =
      sltk::oracle::conformal_factor_ode_oracle(sltk::kTauMax,
                                                {0.0, 1.0, 2.0});
  for (double y : odet) CHECK(std::fabs(y - 2.0 / 3.0) < 1.0e-10);
}

TEST_CASE("period asymptotics report behaves as advertised") {
  const std::vector<double> taus = {1.0e-3, 1.0e-4, 1.0e-5};
  const std::vector<sltk::AsymptoticsRow> rows =
      sltk::period_asymptotics_report(taus);
  REQUIRE(rows.size() == 3);
  for (const sltk::AsymptoticsRow& r : rows) {
    CAPTURE(r.tau, r.p_plus_half_log_tau, r.dp_dtau_times_2tau);
    CHECK(std::fabs(r.p_plus_half_log_tau) < 3.0);
  }
  // Successive decades differ by (1/2) log 10 up to the decaying tail.
  CHECK(std::fabs((rows[1].p_tau - rows[0].p_tau) - 0.5 * std::log(10.0)) <
        0.02);
  CHECK(std::fabs((rows[2].p_tau - rows[1].p_tau) - 0.5 * std::log(10.0)) <
        0.002);
  // dp/dtau approaches -1/(2 tau).
  CHECK(std::fabs(rows[2].dp_dtau_times_2tau + 1.0) < 0.05);
  // Interior check of the implicit-derivative route against differences.
  const sltk::TauParams p = sltk::solve_params(0.05);
  const double h = 1.0e-6;
  const double fd = (sltk::solve_params(0.05 + h).p_tau -
                     sltk::solve_params(0.05 - h).p_tau) /
                    (2.0 * h);
  CHECK(std::fabs(sltk::dp_dtau(p) - fd) < 1.0e-5 * std::fabs(fd));
  // CSV emitter is stable and headed.
  const std::string csv = sltk::asymptotics_csv(rows);
  CHECK(csv.rfind("tau,p_tau,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("decay envelope holds across the admissible interior") {
  for (double tau : {0.01, 0.05, 0.1, 0.18}) {
    CAPTURE(tau);
    CHECK(sltk::decay_envelope_check(sltk::solve_params(tau)) == 0.0);
  }
  // e^{2 p} y_min stays bounded as tau shrinks.
  for (double tau : {0.05, 0.01, 0.001}) {
    const sltk::TauParams p = sltk::solve_params(tau);
    CAPTURE(tau);
    CHECK(p.y_min * std::exp(2.0 * p.p_tau) < 20.0);
  }
}

TEST_CASE("dependence on tau^2 stays smooth toward zero") {
  // Difference quotients of y in tau^2 at fixed t settle to a limit.
  const double t = 1.5;
  std::vector<double> quotients;
  for (double tau : {3.0e-2, 1.0e-2, 3.0e-3}) {
    const double ya = sltk::conformal_factor(sltk::solve_params(tau), t);
    const double tau_b = 0.5 * tau;
    const double yb = sltk::conformal_factor(sltk::solve_params(tau_b), t);
    quotients.push_back((ya - yb) / (tau * tau - tau_b * tau_b));
  }
  for (double q : quotients) CHECK(std::fabs(q) < 10.0);
  CHECK(std::fabs(quotients[2] - quotients[1]) <
        std::fabs(quotients[1] - quotients[0]) + 1.0e-6);
}

TEST_CASE("profile domain errors") {
  CHECK_THROWS_AS(sltk::solve_params(-0.1), std::domain_error);
  CHECK_THROWS_AS(sltk::solve_params(0.2), std::domain_error);
  CHECK_THROWS_AS(sltk::ymin_to_tau(0.7), std::domain_error);
  CHECK_THROWS_AS(sltk::ymin_to_tau(-0.01), std::domain_error);
  CHECK_THROWS_AS(sltk::dp_dtau(sltk::solve_params(0.0)), std::domain_error);
  CHECK_THROWS_AS(sltk::oracle::conformal_factor_ode_oracle(0.5, {0.0}),
                  std::domain_error);
  CHECK_THROWS_AS(
      sltk::oracle::conformal_factor_ode_oracle(0.1, {1.0, 0.5}),
      std::invalid_argument);
}
