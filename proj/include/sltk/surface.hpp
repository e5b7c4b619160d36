#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <sltk/immersion.hpp>
#include <sltk/join.hpp>
#include <sltk/profile.hpp>
#include <sltk/symmetry.hpp>

// Glued initial surfaces. A closed surface of odd genus g is assembled from
// a round 2-sphere with 2g discs removed and g cylinders, each cylinder
// carrying a copy of the doubly periodic torus immersion. One cylinder
// chart covers the fundamental cylinder; the remaining cylinders and the
// reflected half are generated by the ambient symmetries. Along each
// cylinder the chart passes through a collar where it coincides with the
// sphere, a dislocation band where it transits to a slid and twisted
// sphere, and a gluing band where it transits to the torus.

namespace sltk {

// Ambient quadratic potentials whose Hamiltonian flows generate the
// sliding and twisting isometry families.
inline double potential_t(const Vec3c& z) {
  return -0.5 * std::norm(z[0]) + 0.25 * std::norm(z[1]) + 0.25 * std::norm(z[2]);
}

inline double potential_q(const Vec3c& z) {
  return -0.5 * std::norm(z[1]) + 0.5 * std::norm(z[2]);
}

// Colatitude, measured from the e1 axis, of the ray through the real
// projection of the torus immersion at cylinder parameter t. The real
// projection reaches rays well inside the hole bounded by the image of the
// waist, which is what limits how far a radial graph over the torus
// extends.
inline double ray_colatitude(const TorusImmersion& ti, double t) {
  const double y = conformal_factor(ti.params, t);
  const double psi1 = phase1(ti, t);
  const double psi2 = phase2(ti, t);
  const double axial = std::sqrt(std::max(0.0, 1.0 - y)) * std::sin(psi1);
  const double radial = std::sqrt(std::max(0.0, y)) * std::cos(psi2);
  return std::atan2(std::fabs(radial), axial);
}

// Inverts tau -> p_hat on (0, kTauMax]. The rotation period increases
// monotonically from pi/2 to pi/sqrt(3) over that range.
inline TauParams solve_tau_for_phat(double target) {
  const double lo_cap = 1e-4, hi_cap = kTauMax - 1e-12;
  const double p_lo = make_torus(solve_params(lo_cap)).p_hat;
  const double p_hi = make_torus(solve_params(hi_cap)).p_hat;
  if (target <= p_lo || target >= p_hi)
    throw std::domain_error("solve_tau_for_phat: target outside attainable range");
  double lo = lo_cap, hi = hi_cap;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double val = make_torus(solve_params(mid)).p_hat;
    if (val < target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-15) break;
  }
  return solve_params(0.5 * (lo + hi));
}

// Station layout along the fundamental cylinder. The chart equals the
// sphere inclusion on [a, id_end], transits to the slid and twisted sphere
// on [dis_lo, dis_hi], transits to the torus on [glue_lo, glue_hi], and b
// marks the end of the near-sphere region. delta is the colatitude radius
// of the discs removed from the model sphere.
struct LayoutSpec {
  double a = 0.0;
  double id_end = 0.0;
  double dis_lo = 0.0, dis_hi = 0.0;
  double glue_lo = 0.0, glue_hi = 0.0;
  double b = 0.0;
  double delta = 0.0;
  bool compact = false;
};

struct LayoutOptions {
  double pack_margin = 0.97;
  double graph_margin = 1.05;
  double graph_pad = 0.005;
  double collar_frac = 0.10;
  double dis_frac = 0.20;
  double b_frac = 0.30;
  std::optional<LayoutSpec> layout;
};

struct SurfaceModel {
  int genus = 3;
  int m_bar = 3;
  int m = 11;
  TauParams base;
  double p_bar = 0.0;
  double p_hat_bar = 0.0;
  LayoutSpec layout;
  double half_t = 0.0;
  double t_end = 0.0;
};

namespace detail {

inline double asech(double x) { return std::acosh(1.0 / x); }

inline void validate_layout(const SurfaceModel& M, const LayoutSpec& L) {
  const bool ordered = L.a < L.id_end && L.id_end <= L.dis_lo &&
                       L.dis_lo < L.dis_hi && L.dis_hi <= L.glue_lo &&
                       L.glue_lo < L.glue_hi && L.glue_hi <= L.b;
  if (!ordered) throw std::domain_error("surface layout: stations out of order");
  if (L.b >= M.p_bar)
    throw std::domain_error("surface layout: near-sphere region swallows the neck");
  if (L.delta <= 0.0 || std::asin(1.0 / std::cosh(L.a)) >= M_PI / (2.0 * M.genus))
    throw std::domain_error("surface layout: identification annuli overlap");
}

}  // namespace detail

inline SurfaceModel make_surface_model(int genus, int m_bar,
                                       const LayoutOptions& opt = {}) {
  if (genus >= 2 && genus % 2 == 0)
    throw std::domain_error("make_surface_model: even genus unsupported");
  if (genus < 3)
    throw std::domain_error("make_surface_model: genus must be at least 3");
  SurfaceModel M;
  M.genus = genus;
  M.m_bar = m_bar;
  M.m = 4 * m_bar - 1;
  M.base = closing_tau(m_bar);
  TorusImmersion base_torus = make_torus(M.base);
  M.p_bar = M.base.p_tau;
  M.p_hat_bar = base_torus.p_hat;
  M.half_t = M.m * M.p_bar;

  if (opt.layout) {
    M.layout = *opt.layout;
  } else {
    const double delta_paper = M_PI / (100.0 * genus);
    const double a_paper = detail::asech(std::sin(delta_paper)) - 1.0;
    LayoutSpec L;
    if (M.p_bar >= a_paper + 7.0) {
      L.delta = delta_paper;
      L.a = a_paper;
      L.id_end = L.a + 1.0;
      L.dis_lo = L.id_end;
      L.dis_hi = L.a + 2.0;
      L.glue_lo = L.dis_hi;
      L.glue_hi = L.a + 3.0;
      L.b = L.a + 6.0;
      L.compact = false;
    } else {
      const double th_pack = M_PI / (2.0 * genus);
      const double th_waist = ray_colatitude(base_torus, M.p_bar);
      const double colat_hi = opt.pack_margin * th_pack;
      const double colat_lo = opt.graph_margin * th_waist + opt.graph_pad;
      if (colat_lo >= colat_hi - 1e-3)
        throw std::domain_error(
            "make_surface_model: no gluing window between the disc packing "
            "limit and the torus graph limit");
      L.a = detail::asech(std::sin(colat_hi));
      const double win_end = detail::asech(std::sin(colat_lo));
      const double W = win_end - L.a;
      L.id_end = L.a + opt.collar_frac * W;
      L.dis_lo = L.id_end;
      L.dis_hi = L.id_end + opt.dis_frac * W;
      L.glue_lo = L.dis_hi;
      L.glue_hi = win_end;
      L.b = L.glue_hi + opt.b_frac * (M.p_bar - L.glue_hi);
      L.delta = std::asin(1.0 / std::cosh(L.id_end));
      L.compact = true;
    }
    M.layout = L;
  }
  M.t_end = 2.0 * M.half_t - M.layout.a;
  detail::validate_layout(M, M.layout);
  return M;
}

// Region atlas. S[0] is the sphere together with the near-sphere bands of
// every cylinder at both ends; Lambda[n] are the necks centered at odd
// multiples of p_bar and S[n] the bulges centered at even multiples. The
// reflected copies carry a mirror flag, except for the self-mirrored
// outermost neck.
struct RegionId {
  int kind = 0;  // 0 = S, 1 = Lambda
  int index = 0;
  bool mirrored = false;
};

inline RegionId region_of_t(const SurfaceModel& M, double t) {
  const double b = M.layout.b, p = M.p_bar;
  const bool upper = t > M.half_t;
  const double u = upper ? 2.0 * M.half_t - t : t;
  RegionId r;
  if (u <= b) {
    r.kind = 0;
    r.index = 0;
    r.mirrored = upper;
    return r;
  }
  for (int n = 1; n <= 2 * M.m_bar; ++n) {
    if (u <= 2.0 * n * p - b) {
      r.kind = 1;
      r.index = n;
      r.mirrored = upper && n != 2 * M.m_bar;
      return r;
    }
    if (u <= 2.0 * n * p + b) {
      r.kind = 0;
      r.index = n;
      r.mirrored = upper;
      return r;
    }
  }
  r.kind = 1;
  r.index = 2 * M.m_bar;
  r.mirrored = false;
  return r;
}

inline int region_code(const RegionId& r) {
  return (r.kind == 0 ? 0 : 2000) + (r.mirrored ? 1000 : 0) + r.index;
}

inline std::string region_name(int code) {
  std::ostringstream os;
  const bool lambda = code >= 2000;
  const int rest = lambda ? code - 2000 : code;
  const bool mirrored = rest >= 1000;
  const int index = mirrored ? rest - 1000 : rest;
  os << (lambda ? "Lambda[" : "S[") << index << "]" << (mirrored ? "'" : "");
  return os.str();
}

// Exact jets of the tau = 0 cylinder parametrization of the sphere.
inline LegendrianJet sphere_chart_jet(double s, double t) {
  const double se = 1.0 / std::cosh(t), th = std::tanh(t);
  const double cs = std::cos(s), sn = std::sin(s);
  LegendrianJet j;
  j.X = Vec3c(th, se * cs, -se * sn);
  j.X_t = Vec3c(se * se, -se * th * cs, se * th * sn);
  j.X_s = Vec3c(0.0, -se * sn, -se * cs);
  return j;
}

struct GluedOptions {
  double c_bar = 1.0;
  double fd_h = 1e-4;
};

// The assembled initial surface. The fundamental cylinder chart is
// evaluated by chart(); the immersion of cylinder j applies the rotation
// prefix on top of it, and the sphere part is the inclusion of the model
// sphere.
struct GluedImmersion {
  SurfaceModel model;
  double zeta1 = 0.0, zeta2 = 0.0;
  double c1p = 0.0, c2p = 0.0;
  double zeta1p = 0.0, zeta2p = 0.0;
  double alpha = 0.0;
  TauParams tau;
  TorusImmersion torus;
  std::optional<TwistedImmersion> twisted;
  AmbientIsometry pre;
  double fd_h = 1e-4;
};

namespace detail {

inline LegendrianJet apply_jet(const AmbientIsometry& g, LegendrianJet j) {
  apply_isometry(g, j);
  return j;
}

// Torus side of the gluing band: the twist-locked immersion with the lock
// removed, reparametrized to the closing period. With no twist this is the
// reparametrized torus itself.
inline LegendrianJet glued_torus_side(const GluedImmersion& G, double s,
                                      double t) {
  if (!G.twisted) {
    const double c = G.tau.p_tau / G.model.p_bar;
    LegendrianJet j = immerse(G.torus, s, c * t);
    j.X_t *= c;
    return j;
  }
  LegendrianJet j = reparametrized_immerse(*G.twisted, G.model.p_bar, s, t);
  apply_isometry(q_tilde(-G.alpha), j);
  return j;
}

}  // namespace detail

// Fundamental cylinder chart on [a, 2 m p_bar - a]. The upper half is the
// reflection of the lower half through the waist plane at m p_bar.
inline LegendrianJet glued_chart(const GluedImmersion& G, double s, double t) {
  if (t > G.model.half_t) {
    LegendrianJet j = glued_chart(G, s, 2.0 * G.model.half_t - t);
    detail::apply_isometry(t_bar_tilde(), j);
    j.X_t = -j.X_t;
    return j;
  }
  const LayoutSpec& L = G.model.layout;
  if (t <= L.dis_lo) return sphere_chart_jet(s, t);
  if (t < L.dis_hi) {
    JoinSpec spec;
    spec.X0 = [](double ss, double tt) { return sphere_chart_jet(ss, tt); };
    spec.X1 = [&G](double ss, double tt) {
      return detail::apply_jet(G.pre, sphere_chart_jet(ss, tt));
    };
    spec.a = L.dis_lo;
    spec.b = L.dis_hi;
    return join_immerse(spec, s, t, G.fd_h);
  }
  if (t <= L.glue_lo)
    return detail::apply_jet(G.pre, sphere_chart_jet(s, t));
  if (t < L.glue_hi) {
    JoinSpec spec;
    spec.X0 = [](double ss, double tt) { return sphere_chart_jet(ss, tt); };
    spec.X1 = [&G](double ss, double tt) {
      return detail::glued_torus_side(G, ss, tt);
    };
    spec.a = L.glue_lo;
    spec.b = L.glue_hi;
    return detail::apply_jet(G.pre, join_immerse(spec, s, t, G.fd_h));
  }
  return detail::apply_jet(G.pre, detail::glued_torus_side(G, s, t));
}

inline GluedImmersion make_glued(const SurfaceModel& M, double zeta1,
                                 double zeta2, const GluedOptions& opt = {}) {
  const double cap = opt.c_bar * M.base.tau;
  if (std::fabs(zeta1) > cap || std::fabs(zeta2) > cap)
    throw std::domain_error("make_glued: dislocation parameters exceed range");
  GluedImmersion G;
  G.model = M;
  G.zeta1 = zeta1;
  G.zeta2 = zeta2;
  // The transition tangents come from finite differences of the join
  // position, and their truncation error carries the fifth derivative of
  // the cutoff ramp. Tying the step to the ramp width keeps the angle
  // defect of a thin window at the same level as a wide one.
  const double ramp = (M.layout.glue_hi - M.layout.glue_lo) / 3.0;
  G.fd_h = std::min(opt.fd_h, ramp / 6000.0);

  const double x_off = std::min(1.0, M.p_bar - M.layout.b);
  const double y_c = conformal_factor(M.base, M.layout.b + x_off);
  G.c1p = 1.0 / (-0.5 + 0.75 * y_c);
  G.c2p = -2.0 / y_c;
  G.zeta1p = G.c1p * zeta1;
  G.zeta2p = G.c2p * zeta2;

  G.tau = solve_tau_for_phat(M.p_hat_bar - G.zeta1p / M.m);
  G.torus = make_torus(G.tau);
  G.alpha = G.zeta2p / (1.0 - M.m);
  if (std::fabs(G.alpha) > 0.5)
    throw std::domain_error("make_glued: twist angle exceeds range");

  if (G.alpha != 0.0) {
    const double glue_lo_t = M.layout.glue_lo * G.tau.p_tau / M.p_bar;
    const double w_b = std::min(2.0, glue_lo_t - 0.05);
    const double w_a = std::max(0.4, w_b - 1.0);
    if (w_b - w_a < 0.25)
      throw std::domain_error("make_glued: no room for the twist transition");
    TwistedImmersion tw;
    tw.base = G.torus;
    tw.alpha = G.alpha;
    tw.join_a = w_a;
    tw.join_b = w_b;
    G.twisted = tw;
  }

  G.pre = compose(t_tilde(G.zeta1p), q_tilde(G.zeta2p));
  return G;
}

// Immersion of cylinder j (0-based) of the model surface.
inline LegendrianJet glued_immerse(const GluedImmersion& G, int j, double s,
                                   double t) {
  LegendrianJet jet = glued_chart(G, s, t);
  if (j % G.model.genus != 0) {
    AmbientIsometry rot = r_tilde(G.model.genus);
    AmbientIsometry acc = rot;
    for (int k = 1; k < j % G.model.genus; ++k) acc = compose(rot, acc);
    detail::apply_isometry(acc, jet);
  }
  return jet;
}

inline double glued_angle(const GluedImmersion& G, double s, double t) {
  return lagrangian_angle(glued_chart(G, s, t));
}

// Decomposition of the Lagrangian angle into the three mechanisms that
// produce it: the sphere-to-torus gluing, the twist transitions of the
// torus, and the dislocation remainder. The gluing part is the angle of
// the build with the same torus parameter but no dislocation; the twisting
// part is the angle of the twisted torus itself; the dislocation part is
// exactly what is left.
struct AngleSample {
  double total = 0.0;
  double gluing = 0.0;
  double twisting = 0.0;
  double dislocation = 0.0;
};

// Reference build sharing the torus parameter of G but with zeta = 0.
inline GluedImmersion gluing_reference(const GluedImmersion& G) {
  GluedImmersion R;
  R.model = G.model;
  R.tau = G.tau;
  R.torus = G.torus;
  R.fd_h = G.fd_h;
  R.pre = AmbientIsometry{};
  return R;
}

inline double twisting_angle(const GluedImmersion& G, double s, double t) {
  if (!G.twisted) return 0.0;
  const double c = G.tau.p_tau / G.model.p_bar;
  return lagrangian_angle(twisted_immerse(*G.twisted, s, c * t));
}

inline AngleSample angle_decomposition(const GluedImmersion& G,
                                       const GluedImmersion& ref, double s,
                                       double t) {
  AngleSample a;
  a.total = glued_angle(G, s, t);
  const double u = std::min(t, 2.0 * G.model.half_t - t);
  const double sgn = t > G.model.half_t ? -1.0 : 1.0;
  a.gluing = sgn * glued_angle(ref, s, u);
  a.twisting = sgn * twisting_angle(G, s, u);
  a.dislocation = a.total - a.gluing - a.twisting;
  return a;
}

// Declared supports of the three components, as intervals in the chart
// parameter t of the lower half; each is understood together with its
// mirror image. The twisting support lists the twist transition bands of
// the torus that the assembled surface actually evaluates.
struct SupportAtlas {
  std::vector<std::pair<double, double>> gluing;
  std::vector<std::pair<double, double>> twisting;
  std::vector<std::pair<double, double>> dislocation;
};

inline SupportAtlas support_atlas(const GluedImmersion& G) {
  SupportAtlas S;
  const LayoutSpec& L = G.model.layout;
  S.gluing.push_back({L.glue_lo, L.glue_hi});
  S.dislocation.push_back({L.dis_lo, L.dis_hi});
  if (G.twisted) {
    const double c = G.model.p_bar / G.tau.p_tau;
    const double wa = G.twisted->join_a, wb = G.twisted->join_b;
    const double period = 2.0 * G.tau.p_tau;
    for (int k = 0; k * period - wa <= G.model.half_t / c + 1.0; ++k) {
      const double lo1 = (k * period - wb) * c, hi1 = (k * period - wa) * c;
      const double lo2 = (k * period + wa) * c, hi2 = (k * period + wb) * c;
      if (hi1 > L.glue_lo) {
        S.twisting.push_back({std::max(lo1, L.glue_lo), hi1});
        if (lo1 < L.glue_hi)
          S.dislocation.push_back({std::max(lo1, L.glue_lo),
                                   std::min(hi1, L.glue_hi)});
      }
      if (hi2 > L.glue_lo) {
        S.twisting.push_back({std::max(lo2, L.glue_lo), hi2});
        if (lo2 < L.glue_hi)
          S.dislocation.push_back({std::max(lo2, L.glue_lo),
                                   std::min(hi2, L.glue_hi)});
      }
    }
  }
  return S;
}

inline bool in_support(const std::vector<std::pair<double, double>>& bands,
                       const SurfaceModel& M, double t, double pad = 0.0) {
  const double u = std::min(t, 2.0 * M.half_t - t);
  for (const auto& b : bands)
    if (u > b.first - pad && u < b.second + pad) return true;
  return false;
}

// Pointwise symmetry checks of the fundamental chart: reflection through
// the waist plane, the two reflections acting on the circle factor, and
// continuity of the chart across the waist seam.
inline SymmetryReport glued_symmetry_report(const GluedImmersion& G, int ns,
                                            int nt) {
  SymmetryReport rep;
  const SurfaceModel& M = G.model;
  AmbientIsometry sb = s_bar_tilde(), sp = s_pi_tilde(), tb = t_bar_tilde();
  auto record = [&rep](const std::string& name, double defect) {
    rep.checks.push_back({name, defect});
  };
  double d_sb = 0.0, d_sp = 0.0, d_tb = 0.0, d_seam = 0.0;
  for (int i = 0; i < ns; ++i) {
    const double s = 2.0 * M_PI * i / ns;
    for (int k = 0; k <= nt; ++k) {
      const double t = M.layout.a + (M.t_end - 2.0 * M.layout.a) * k / nt;
      const LegendrianJet base = glued_chart(G, s, t);
      d_sb = std::max(d_sb,
                      (glued_chart(G, -s, t).X - sb(base.X)).cwiseAbs().maxCoeff());
      d_sp = std::max(d_sp,
                      (glued_chart(G, s + M_PI, t).X - sp(base.X)).cwiseAbs().maxCoeff());
      d_tb = std::max(d_tb,
                      (glued_chart(G, s, 2.0 * M.half_t - t).X - tb(base.X))
                          .cwiseAbs().maxCoeff());
    }
    // The reflected half reproduces the unreflected torus formula across
    // the waist when the dislocation parameters are consistent.
    for (int k = 0; k <= 8; ++k) {
      const double u = 0.9 * k / 8.0;
      const LegendrianJet lower =
          detail::apply_jet(G.pre, detail::glued_torus_side(G, s, M.half_t - u));
      const LegendrianJet upper =
          detail::apply_jet(G.pre, detail::glued_torus_side(G, s, M.half_t + u));
      d_seam = std::max(d_seam, (upper.X - tb(lower.X)).cwiseAbs().maxCoeff());
    }
  }
  record("circle_reflection", d_sb);
  record("circle_half_turn", d_sp);
  record("waist_reflection", d_tb);
  record("waist_seam", d_seam);
  return rep;
}

}  // namespace sltk
