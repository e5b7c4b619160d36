/* Generates the frozen reference table tests/data/elliptic_vectors.csv.
 *
 * Every value is produced by the quadrature oracle, never by the
 * production code, so the table is an independent record.  Run with an
 * output path argument, e.g.
 *
 *   gen_elliptic_vectors tests/data/elliptic_vectors.csv
 *
 * The output is deterministic: fixed seeds, fixed grids, fixed %.17g
 * formatting.  Regenerate only when the table layout itself changes.
 */

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "sltk/elliptic_oracle.hpp"

namespace {

struct Row {
  const char* kind;
  double a, b, c, value;
};

void emit(std::vector<Row>& rows, const char* kind, double a, double b,
          double c, double value) {
  rows.push_back({kind, a, b, c, value});
}

}  // namespace

int main(int argc, char* argv[]) {
  const std::string path = argc > 1 ? argv[1] : "elliptic_vectors.csv";
  std::vector<Row> rows;

  const std::vector<double> k_complete = {
      0.0,  1.0e-6, 0.01, 0.1,  0.3,          0.5,
      0.7,  0.9,    0.99, 0.9999, 1.0 - 1.0e-8, 1.0 - 1.0e-12};
  for (double k : k_complete) {
    emit(rows, "K", k, 0.0, 0.0, sltk::oracle::complete_K(k));
    emit(rows, "E", k, 0.0, 0.0, sltk::oracle::complete_E(k));
  }
  emit(rows, "E", 1.0, 0.0, 0.0, sltk::oracle::complete_E(1.0));

  const std::vector<double> phis = {-7.3, -2.0, -1.5, -0.6, 0.3,
                                    1.2,  1.5707, 2.5, 5.0, 9.42};
  const std::vector<double> k_inc = {0.02, 0.3, 0.7, 0.95, 0.9999};
  for (double phi : phis)
    for (double k : k_inc) {
      emit(rows, "F", phi, k, 0.0, sltk::oracle::incomplete_F(phi, k));
      emit(rows, "D", phi, k, 0.0, sltk::oracle::incomplete_D(phi, k));
    }

  const std::vector<double> us = {-5.5, -1.2, 0.4, 1.8, 3.9, 8.0};
  const std::vector<double> alpha_sqs = {-4.0, -0.9, 0.25, 0.8, 0.97};
  const std::vector<double> k_third = {0.1, 0.6, 0.97};
  for (double u : us)
    for (double a2 : alpha_sqs)
      for (double k : k_third)
        emit(rows, "Lambda", u, a2, k,
             sltk::oracle::third_kind_Lambda(u, a2, k));

  const std::vector<double> phis_h = {0.2, 0.7, 1.2, 1.5};
  const std::vector<double> k_heuman = {0.1, 0.5, 0.9, 0.999, 1.0 - 1.0e-7};
  for (double phi : phis_h)
    for (double k : k_heuman)
      emit(rows, "Lambda0", phi, k, 0.0,
           sltk::oracle::heuman_lambda0(phi, k));

  std::mt19937 rng(20240517u);
  std::uniform_real_distribution<double> u_dist(-10.0, 10.0);
  std::uniform_real_distribution<double> k_dist(0.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    const double u = u_dist(rng);
    const double k = k_dist(rng);
    const sltk::oracle::JacobiRef j = sltk::oracle::jacobi(u, k);
    emit(rows, "sn", u, k, 0.0, j.sn);
    emit(rows, "cn", u, k, 0.0, j.cn);
    emit(rows, "dn", u, k, 0.0, j.dn);
  }
  const std::vector<std::pair<double, double>> jacobi_edges = {
      {0.37, 1.0e-5}, {2.2, 1.0 - 1.0e-10}, {-6.1, 1.0 - 1.0e-13},
      {15.0, 0.999},  {0.0, 0.5},           {3.7, 0.0}};
  for (auto [u, k] : jacobi_edges) {
    const sltk::oracle::JacobiRef j = sltk::oracle::jacobi(u, k);
    emit(rows, "sn", u, k, 0.0, j.sn);
    emit(rows, "cn", u, k, 0.0, j.cn);
    emit(rows, "dn", u, k, 0.0, j.dn);
  }

  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) {
    std::fprintf(stderr, "cannot open %s for writing\n", path.c_str());
    return 1;
  }
  std::fprintf(out, "kind,a,b,c,value\n");
  for (const Row& r : rows)
    std::fprintf(out, "%s,%.17g,%.17g,%.17g,%.17g\n", r.kind, r.a, r.b, r.c,
                 r.value);
  std::fclose(out);
  std::fprintf(stderr, "wrote %zu rows to %s\n", rows.size(), path.c_str());
  return 0;
}
