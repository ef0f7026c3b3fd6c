#include "vprv/integrator.hpp"

#include <cmath>
#include <stdexcept>

namespace vprv {

namespace ssprk54 {

Butcher butcher() {
  Butcher t;
  // accumulate row by row: each stage is a convex combination of earlier
  // stage vectors plus one Euler increment
  t.a[1][0] = b10;
  for (int j = 0; j < stages; ++j) t.a[2][j] = a21 * t.a[1][j];
  t.a[2][1] += b21;
  for (int j = 0; j < stages; ++j) t.a[3][j] = a32 * t.a[2][j];
  t.a[3][2] += b32;
  for (int j = 0; j < stages; ++j) t.a[4][j] = a43 * t.a[3][j];
  t.a[4][3] += b43;
  for (int j = 0; j < stages; ++j)
    t.b[j] = a52 * t.a[2][j] + a53 * t.a[3][j] + a54 * t.a[4][j];
  t.b[3] += b53;
  t.b[4] += b54;
  for (int i = 0; i < stages; ++i) {
    t.c[i] = 0.0;
    for (int j = 0; j < stages; ++j) t.c[i] += t.a[i][j];
  }
  return t;
}

std::array<double, stages + 1> stability_polynomial() {
  Butcher t = butcher();
  std::array<double, stages + 1> gamma{};
  gamma[0] = 1.0;
  // gamma_{m+1} = b^T A^m 1
  std::array<double, stages> v;
  v.fill(1.0);
  for (int m = 1; m <= stages; ++m) {
    double s = 0.0;
    for (int i = 0; i < stages; ++i) s += t.b[i] * v[i];
    gamma[m] = s;
    std::array<double, stages> next{};
    for (int i = 0; i < stages; ++i)
      for (int j = 0; j < stages; ++j) next[i] += t.a[i][j] * v[j];
    v = next;
  }
  return gamma;
}

}  // namespace ssprk54

double cfl_timestep(const TensorMesh& mesh, const AdvectionField& beta,
                    double cfl, double dt_max) {
  double h2 = 0.0;
  for (int a = 0; a < mesh.dim(); ++a) h2 += mesh.axis(a).h * mesh.axis(a).h;
  double bmax = beta.max_norm(mesh);
  if (bmax <= 0.0) {
    if (dt_max > 0.0) return dt_max;
    throw std::invalid_argument(
        "cfl_timestep: vanishing advection field and no dt_max");
  }
  double dt = cfl * std::sqrt(h2) / (mesh.degree() * bmax);
  if (dt_max > 0.0) dt = std::min(dt, dt_max);
  return dt;
}

}  // namespace vprv
