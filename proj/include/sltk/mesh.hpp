#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <sltk/surface.hpp>

// Watertight triangle meshes of the glued surfaces. The model sphere minus
// the 2g discs is meshed as two polar patches separated by the great
// circle through the removed discs; each cylinder is meshed on a tensor
// grid whose end rows coincide vertex for vertex with the disc boundaries,
// so the mesh closes up without duplicated or hanging vertices. Rows are
// mirror-symmetric about the cylinder midpoint and the whole vertex set is
// invariant under the symmetry group of the surface, which allows exact
// orbit bookkeeping by position matching.

namespace sltk {

struct MeshVertex {
  Vec3c pos;
  int chart = -1;  // -1 for the sphere, else cylinder index
  double s = 0.0, t = 0.0;
  int region = 0;
  int orbit = -1;
  double theta = 0.0;
};

struct EdgeReport {
  bool watertight = false;
  bool oriented = false;
  std::int64_t edges = 0;
  std::int64_t bad_count = 0;
  std::int64_t bad_orientation = 0;
};

struct SurfaceMesh {
  int genus = 3;
  int m_bar = 3;
  std::vector<MeshVertex> verts;
  std::vector<std::array<int, 3>> faces;
  std::vector<int> face_region;

  EdgeReport edge_report() const {
    std::unordered_map<std::uint64_t, std::pair<int, int>> edges;
    edges.reserve(faces.size() * 2);
    for (const auto& f : faces) {
      for (int e = 0; e < 3; ++e) {
        const int u = f[e], v = f[(e + 1) % 3];
        const std::uint64_t key =
            (static_cast<std::uint64_t>(std::min(u, v)) << 32) |
            static_cast<std::uint32_t>(std::max(u, v));
        auto& rec = edges[key];
        rec.first += 1;
        rec.second += (u < v) ? 1 : -1;
      }
    }
    EdgeReport r;
    r.edges = static_cast<std::int64_t>(edges.size());
    for (const auto& kv : edges) {
      if (kv.second.first != 2) ++r.bad_count;
      if (kv.second.second != 0) ++r.bad_orientation;
    }
    r.watertight = r.bad_count == 0;
    r.oriented = r.bad_orientation == 0;
    return r;
  }

  std::int64_t euler_characteristic() const {
    return static_cast<std::int64_t>(verts.size()) - edge_report().edges +
           static_cast<std::int64_t>(faces.size());
  }
};

struct MeshOptions {
  int ns = 32;              // circle samples, multiple of 4
  double base_h = 0.12;     // target row spacing in the quiet zones
  int band_rows = 22;       // rows across each transition band
  int min_region_rows = 6;  // minimum rows per neck or bulge
  int rings = 8;            // interior rings of each polar sphere patch
  int gap_samples = 4;      // equator samples between consecutive discs
  bool with_theta = true;
};

namespace detail {

inline Eigen::Vector3d real_part(const Vec3c& z) {
  return Eigen::Vector3d(z[0].real(), z[1].real(), z[2].real());
}

inline Vec3c complexify(const Eigen::Vector3d& x) {
  return Vec3c(x[0], x[1], x[2]);
}

inline Eigen::Vector3d sphere_slerp(const Eigen::Vector3d& a,
                                    const Eigen::Vector3d& b, double rho) {
  const double c = std::clamp(a.dot(b), -1.0, 1.0);
  const double ang = std::acos(c);
  if (ang < 1e-14) return b;
  return (std::sin((1.0 - rho) * ang) * a + std::sin(rho * ang) * b) /
         std::sin(ang);
}

// Cylinder rows on the lower half [id_end, half_t], later mirrored. Each
// transition band gets a fixed number of rows; necks and bulges get at
// least min_region_rows however short they are.
inline std::vector<double> cylinder_rows(const SurfaceModel& M,
                                         const MeshOptions& opt) {
  const LayoutSpec& L = M.layout;
  std::vector<double> cuts{L.id_end, L.dis_hi, L.glue_lo, L.glue_hi, L.b};
  for (int n = 1; n <= 2 * M.m_bar; ++n) {
    const double neck_end = 2.0 * n * M.p_bar - L.b;
    if (neck_end >= M.half_t) break;
    cuts.push_back(neck_end);
    const double bulge_end = 2.0 * n * M.p_bar + L.b;
    if (bulge_end >= M.half_t) break;
    cuts.push_back(bulge_end);
  }
  cuts.push_back(M.half_t);
  std::vector<double> rows;
  rows.push_back(cuts.front());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    const double len = hi - lo;
    if (len <= 1e-12) continue;
    int n;
    if (hi <= L.glue_hi && lo >= L.id_end && len < 1.5)
      n = opt.band_rows;
    else
      n = std::max(opt.min_region_rows,
                   static_cast<int>(std::ceil(len / opt.base_h)));
    for (int k = 1; k <= n; ++k) rows.push_back(lo + len * k / n);
  }
  return rows;
}

}  // namespace detail

inline SurfaceMesh build_surface_mesh(const GluedImmersion& G,
                                      const MeshOptions& opt = {}) {
  if (opt.ns < 8 || opt.ns % 4 != 0)
    throw std::domain_error("build_surface_mesh: ns must be a multiple of 4");
  const SurfaceModel& M = G.model;
  const int g = M.genus, ns = opt.ns;
  SurfaceMesh mesh;
  mesh.genus = g;
  mesh.m_bar = M.m_bar;

  auto add_vertex = [&mesh](const Vec3c& pos, int chart, double s, double t,
                            int region) {
    MeshVertex v;
    v.pos = pos;
    v.chart = chart;
    v.s = s;
    v.t = t;
    v.region = region;
    mesh.verts.push_back(v);
    return static_cast<int>(mesh.verts.size()) - 1;
  };
  auto add_face = [&mesh](int a, int b, int c, int region) {
    mesh.faces.push_back({a, b, c});
    mesh.face_region.push_back(region);
  };

  // Disc boundary circles. Circle jc surrounds the vertex at longitude
  // jc*pi/g; even circles are the bottom rows of the cylinders, odd
  // circles the top rows. All their vertices are created once and shared
  // by the sphere patches and the cylinder grids.
  const double t0 = M.layout.id_end;
  const double t1 = 2.0 * M.half_t - t0;
  Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
  {
    const double c = std::cos(2.0 * M_PI / g), s = std::sin(2.0 * M_PI / g);
    rot << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  }
  std::vector<std::vector<int>> circle(2 * g, std::vector<int>(ns, -1));
  std::vector<int> circle_cyl(2 * g, 0);
  std::vector<bool> circle_top(2 * g, false);
  for (int jc = 0; jc < 2 * g; ++jc) {
    const bool top = jc % 2 != 0;
    const int j = top ? ((jc - g) % (2 * g) + 2 * g) % (2 * g) / 2 : jc / 2;
    circle_cyl[jc] = j;
    circle_top[jc] = top;
    Eigen::Matrix3d pref = Eigen::Matrix3d::Identity();
    for (int k = 0; k < j; ++k) pref = rot * pref;
    for (int i = 0; i < ns; ++i) {
      const double s = 2.0 * M_PI * i / ns;
      Eigen::Vector3d p = detail::real_part(sphere_chart_jet(s, t0).X);
      if (top) p[0] = -p[0];
      p = pref * p;
      circle[jc][i] =
          add_vertex(detail::complexify(p), j, s, top ? t1 : t0, 0);
    }
  }

  // Boundary loop of the upper polar patch, ordered by longitude. Even
  // circles are traversed with s increasing from pi to 2 pi, odd circles
  // in the reverse order; between consecutive circles the loop follows the
  // equator arc.
  std::vector<int> loop;
  std::vector<int> gap_start(2 * g, 0);
  for (int jc = 0; jc < 2 * g; ++jc) {
    if (jc % 2 == 0) {
      for (int i = ns / 2; i < ns; ++i) loop.push_back(circle[jc][i]);
      loop.push_back(circle[jc][0]);
    } else {
      loop.push_back(circle[jc][0]);
      for (int i = ns - 1; i >= ns / 2; --i) loop.push_back(circle[jc][i]);
    }
    gap_start[jc] = static_cast<int>(loop.size());
    const double delta_lon =
        std::atan2(std::sin(M.layout.delta), std::cos(M.layout.delta));
    const double exit_lon = jc * M_PI / g + delta_lon;
    const double entry_lon = (jc + 1) * M_PI / g - delta_lon;
    for (int q = 1; q <= opt.gap_samples; ++q) {
      const double lon =
          exit_lon + (entry_lon - exit_lon) * q / (opt.gap_samples + 1);
      const Eigen::Vector3d p(std::cos(lon), std::sin(lon), 0.0);
      loop.push_back(add_vertex(detail::complexify(p), -1, 0.0, 0.0, 0));
    }
  }
  const int n_phi = static_cast<int>(loop.size());

  // Interior rings of the upper patch by great-circle interpolation toward
  // the pole, a center vertex, and the mirrored lower patch sharing every
  // equator vertex.
  const Eigen::Vector3d pole(0.0, 0.0, 1.0);
  std::vector<std::vector<int>> ring(opt.rings, std::vector<int>(n_phi, -1));
  std::vector<int> mirror(static_cast<int>(mesh.verts.size()) + 0, -1);
  auto ensure_mirror_size = [&mirror, &mesh]() {
    mirror.resize(mesh.verts.size(), -1);
  };
  for (int k = 1; k < opt.rings; ++k) {
    const double rho = static_cast<double>(k) / opt.rings;
    for (int q = 0; q < n_phi; ++q) {
      const Eigen::Vector3d b = detail::real_part(mesh.verts[loop[q]].pos);
      const Eigen::Vector3d p = detail::sphere_slerp(pole, b, rho);
      ring[k][q] = add_vertex(detail::complexify(p), -1, 0.0, 0.0, 0);
    }
  }
  const int center_u = add_vertex(detail::complexify(pole), -1, 0.0, 0.0, 0);
  ensure_mirror_size();

  // Mirror map: equator vertices map to themselves, circle vertices to the
  // reflected position on the same circle, interior vertices to a fresh
  // copy with the third coordinate negated.
  for (int jc = 0; jc < 2 * g; ++jc)
    for (int i = 0; i < ns; ++i)
      mirror[circle[jc][i]] = circle[jc][(ns - i) % ns];
  for (int q = 0; q < n_phi; ++q) {
    if (mirror[loop[q]] == -1) mirror[loop[q]] = loop[q];  // gap vertices
  }
  for (int k = 1; k < opt.rings; ++k)
    for (int q = 0; q < n_phi; ++q) {
      const int id = ring[k][q];
      Eigen::Vector3d p = detail::real_part(mesh.verts[id].pos);
      p[2] = -p[2];
      ensure_mirror_size();
      mirror[id] = add_vertex(detail::complexify(p), -1, 0.0, 0.0, 0);
    }
  ensure_mirror_size();
  mirror[center_u] = add_vertex(detail::complexify(-pole), -1, 0.0, 0.0, 0);
  ensure_mirror_size();

  // Upper patch faces (outward winding) and their mirrored copies.
  std::vector<std::array<int, 3>> upper;
  for (int q = 0; q < n_phi; ++q) {
    const int q1 = (q + 1) % n_phi;
    upper.push_back({center_u, ring[1][q], ring[1][q1]});
  }
  for (int k = 1; k < opt.rings; ++k) {
    for (int q = 0; q < n_phi; ++q) {
      const int q1 = (q + 1) % n_phi;
      const int a = ring[k][q], a1 = ring[k][q1];
      const int b = k + 1 < opt.rings ? ring[k + 1][q] : loop[q];
      const int b1 = k + 1 < opt.rings ? ring[k + 1][q1] : loop[q1];
      upper.push_back({a, b, b1});
      upper.push_back({a, b1, a1});
    }
  }
  for (const auto& f : upper) add_face(f[0], f[1], f[2], region_code({0, 0, false}));
  for (const auto& f : upper)
    add_face(mirror[f[0]], mirror[f[2]], mirror[f[1]], region_code({0, 0, true}));

  // Cylinder grids. Row 0 and the last row are the shared disc circles;
  // interior rows are fresh vertices evaluated through the glued chart.
  const std::vector<double> lower_rows = detail::cylinder_rows(M, opt);
  std::vector<double> rows(lower_rows);
  for (auto it = lower_rows.rbegin(); it != lower_rows.rend(); ++it) {
    const double mirrored = 2.0 * M.half_t - *it;
    if (mirrored - rows.back() > 1e-12) rows.push_back(mirrored);
  }
  const int K = static_cast<int>(rows.size()) - 1;

  for (int j = 0; j < g; ++j) {
    std::vector<std::vector<int>> grid(K + 1, std::vector<int>(ns, -1));
    grid[0] = circle[2 * j];
    int top_jc = -1;
    for (int jc = 1; jc < 2 * g; jc += 2)
      if (circle_cyl[jc] == j) top_jc = jc;
    grid[K] = circle[top_jc];
    for (int k = 1; k < K; ++k) {
      const double t = rows[k];
      const int region = region_code(region_of_t(M, t));
      for (int i = 0; i < ns; ++i) {
        const double s = 2.0 * M_PI * i / ns;
        const LegendrianJet jet = glued_immerse(G, j, s, t);
        grid[k][i] = add_vertex(jet.X, j, s, t, region);
        if (opt.with_theta) mesh.verts.back().theta = lagrangian_angle(jet);
      }
    }
    for (int k = 0; k < K; ++k) {
      const double t_mid = 0.5 * (rows[k] + rows[k + 1]);
      const int region = region_code(region_of_t(M, t_mid));
      for (int i = 0; i < ns; ++i) {
        const int i1 = (i + 1) % ns;
        add_face(grid[k][i], grid[k + 1][i], grid[k + 1][i1], region);
        add_face(grid[k][i], grid[k + 1][i1], grid[k][i1], region);
      }
    }
  }
  return mesh;
}

// Symmetry orbits by position matching. The four generators act on
// positions through their ambient representations; every image must find a
// mesh vertex within the matching tolerance, and orbits are the connected
// components of the resulting matching graph.
struct OrbitReport {
  int orbits = 0;
  double max_match_dist = 0.0;
  bool complete = true;
};

inline OrbitReport compute_orbits(SurfaceMesh& mesh, double tol = 1e-6) {
  const int n = static_cast<int>(mesh.verts.size());
  const double cell = 4.0 * tol;
  std::unordered_map<std::uint64_t, std::vector<int>> grid;
  grid.reserve(2 * n);
  auto key_of = [cell](const Vec3c& z, const std::array<int, 6>& off) {
    std::uint64_t h = 1469598103934665603ull;
    const double comps[6] = {z[0].real(), z[0].imag(), z[1].real(),
                             z[1].imag(), z[2].real(), z[2].imag()};
    for (int d = 0; d < 6; ++d) {
      const std::int64_t q =
          static_cast<std::int64_t>(std::floor(comps[d] / cell)) + off[d];
      h ^= static_cast<std::uint64_t>(q) + 0x9e3779b97f4a7c15ull + (h << 6) +
           (h >> 2);
    }
    return h;
  };
  const std::array<int, 6> zero{0, 0, 0, 0, 0, 0};
  for (int i = 0; i < n; ++i) grid[key_of(mesh.verts[i].pos, zero)].push_back(i);

  auto find_near = [&](const Vec3c& z, double& dist) {
    int best = -1;
    dist = 1e30;
    std::array<int, 6> off;
    for (int mask = 0; mask < 64; ++mask) {
      const double comps[6] = {z[0].real(), z[0].imag(), z[1].real(),
                               z[1].imag(), z[2].real(), z[2].imag()};
      bool skip = false;
      for (int d = 0; d < 6; ++d) {
        const double lo = std::floor((comps[d] - tol) / cell);
        const double hi = std::floor((comps[d] + tol) / cell);
        const int o = (mask >> d) & 1;
        if (o == 1 && hi == lo) {
          skip = true;
          break;
        }
        off[d] = static_cast<int>((o ? hi : lo) -
                                  std::floor(comps[d] / cell));
      }
      if (skip) continue;
      auto it = grid.find(key_of(z, off));
      if (it == grid.end()) continue;
      for (int i : it->second) {
        const double d = (mesh.verts[i].pos - z).cwiseAbs().maxCoeff();
        if (d < dist) {
          dist = d;
          best = i;
        }
      }
    }
    return best;
  };

  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };

  const int g = mesh.genus;
  const double c = std::cos(2.0 * M_PI / g), s = std::sin(2.0 * M_PI / g);
  auto gen_r = [c, s](const Vec3c& z) {
    return Vec3c(c * z[0] - s * z[1], s * z[0] + c * z[1], z[2]);
  };
  auto gen_tb = [](const Vec3c& z) {
    return Vec3c(-std::conj(z[0]), std::conj(z[1]), std::conj(z[2]));
  };
  auto gen_sb = [](const Vec3c& z) { return Vec3c(z[0], z[1], -z[2]); };
  auto gen_sp = [](const Vec3c& z) { return Vec3c(z[0], -z[1], -z[2]); };

  OrbitReport rep;
  for (int i = 0; i < n; ++i) {
    const Vec3c& z = mesh.verts[i].pos;
    const Vec3c images[4] = {gen_r(z), gen_tb(z), gen_sb(z), gen_sp(z)};
    for (const Vec3c& w : images) {
      double dist;
      const int m = find_near(w, dist);
      if (m < 0 || dist > tol) {
        rep.complete = false;
        continue;
      }
      rep.max_match_dist = std::max(rep.max_match_dist, dist);
      unite(i, m);
    }
  }
  for (int i = 0; i < n; ++i) mesh.verts[i].orbit = find(i);
  std::map<int, int> roots;
  for (int i = 0; i < n; ++i) roots[mesh.verts[i].orbit] = 1;
  rep.orbits = static_cast<int>(roots.size());
  return rep;
}

// Binary little-endian PLY with full complex coordinates, the Lagrangian
// angle, and the region and orbit labels.
inline void write_ply(const SurfaceMesh& mesh, std::ostream& os) {
  os << "ply\nformat binary_little_endian 1.0\n"
     << "comment closed Legendrian initial surface\n"
     << "comment re/im: complex coordinates; theta: Lagrangian angle\n"
     << "comment region: region atlas code; orbit: symmetry orbit id\n"
     << "element vertex " << mesh.verts.size() << "\n"
     << "property double re1\nproperty double im1\n"
     << "property double re2\nproperty double im2\n"
     << "property double re3\nproperty double im3\n"
     << "property double theta\nproperty int region\nproperty int orbit\n"
     << "element face " << mesh.faces.size() << "\n"
     << "property list uchar int vertex_indices\nend_header\n";
  auto put_d = [&os](double x) {
    os.write(reinterpret_cast<const char*>(&x), sizeof(double));
  };
  auto put_i = [&os](std::int32_t x) {
    os.write(reinterpret_cast<const char*>(&x), sizeof(std::int32_t));
  };
  for (const auto& v : mesh.verts) {
    for (int d = 0; d < 3; ++d) {
      put_d(v.pos[d].real());
      put_d(v.pos[d].imag());
    }
    put_d(v.theta);
    put_i(v.region);
    put_i(v.orbit);
  }
  for (const auto& f : mesh.faces) {
    const unsigned char three = 3;
    os.write(reinterpret_cast<const char*>(&three), 1);
    for (int d = 0; d < 3; ++d) put_i(f[d]);
  }
}

// Wavefront OBJ projection to a real 3-subspace. Axes select from the six
// real components in the order re1, im1, re2, im2, re3, im3.
inline void write_obj(const SurfaceMesh& mesh, std::ostream& os,
                      const std::array<int, 3>& axes = {0, 2, 4}) {
  for (int a : axes)
    if (a < 0 || a > 5)
      throw std::domain_error("write_obj: axis index out of range");
  char buf[160];
  for (const auto& v : mesh.verts) {
    const double comps[6] = {v.pos[0].real(), v.pos[0].imag(),
                             v.pos[1].real(), v.pos[1].imag(),
                             v.pos[2].real(), v.pos[2].imag()};
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", comps[axes[0]],
                  comps[axes[1]], comps[axes[2]]);
    os << buf;
  }
  for (const auto& f : mesh.faces) {
    std::snprintf(buf, sizeof buf, "f %d %d %d\n", f[0] + 1, f[1] + 1,
                  f[2] + 1);
    os << buf;
  }
}

// Angle field over the fundamental cylinder chart with its decomposition,
// one row per grid node.
inline std::string angle_field_csv(const GluedImmersion& G, int ns, int nt) {
  const GluedImmersion ref = gluing_reference(G);
  std::ostringstream os;
  os << "s,t,theta,theta_gluing,theta_twisting,theta_dislocation\n";
  char buf[200];
  for (int i = 0; i < ns; ++i) {
    const double s = 2.0 * M_PI * i / ns;
    for (int k = 0; k <= nt; ++k) {
      const double t = G.model.layout.a +
                       (2.0 * G.model.half_t - 2.0 * G.model.layout.a) * k / nt;
      const AngleSample a = angle_decomposition(G, ref, s, t);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    s, t, a.total, a.gluing, a.twisting, a.dislocation);
      os << buf;
    }
  }
  return os.str();
}

}  // namespace sltk
