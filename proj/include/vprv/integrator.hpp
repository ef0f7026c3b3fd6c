#pragma once

#include <array>
#include <span>
#include <vector>

#include "vprv/fem.hpp"
#include "vprv/mesh.hpp"

namespace vprv {

/// Five-stage fourth-order strong-stability-preserving Runge-Kutta scheme
/// in Shu-Osher form (effective SSP coefficient about 1.508).
namespace ssprk54 {

inline constexpr int stages = 5;

inline constexpr double b10 = 0.391752226571890;
inline constexpr double a20 = 0.444370493651235;
inline constexpr double a21 = 0.555629506348765;
inline constexpr double b21 = 0.368410593050371;
inline constexpr double a30 = 0.620101851488403;
inline constexpr double a32 = 0.379898148511597;
inline constexpr double b32 = 0.251891774271694;
inline constexpr double a40 = 0.178079954393132;
inline constexpr double a43 = 0.821920045606868;
inline constexpr double b43 = 0.544974750228521;
inline constexpr double a52 = 0.517231671970585;
inline constexpr double a53 = 0.096059710526147;
inline constexpr double b53 = 0.063692468666290;
inline constexpr double a54 = 0.386708617503269;
inline constexpr double b54 = 0.226007483236906;

struct Butcher {
  std::array<std::array<double, stages>, stages> a{};
  std::array<double, stages> b{};
  std::array<double, stages> c{};
};

/// Equivalent Butcher tableau of the Shu-Osher form.
Butcher butcher();

/// Coefficients of the stability polynomial P(z) = sum gamma_j z^j obtained
/// by applying one step to u' = lambda u.
std::array<double, stages + 1> stability_polynomial();

}  // namespace ssprk54

/// One SSP-RK(5,4) step.  `rhs` evaluates out = L(u) and is called once per
/// stage, so time-dependent operators refresh per stage.  `work` must hold
/// five vectors of the solution size.
template <class Rhs>
void ssprk54_step(Rhs&& rhs, std::vector<double>& u, double dt,
                  std::array<std::vector<double>, 5>& work) {
  using namespace ssprk54;
  const size_t n = u.size();
  std::vector<double>& u1 = work[0];
  std::vector<double>& u2 = work[1];
  std::vector<double>& u3 = work[2];
  std::vector<double>& u4 = work[3];
  std::vector<double>& fs = work[4];
  u1.resize(n);
  u2.resize(n);
  u3.resize(n);
  u4.resize(n);
  fs.resize(n);

  rhs(u, fs);  // F(u0)
  for (size_t i = 0; i < n; ++i) u1[i] = u[i] + b10 * dt * fs[i];
  rhs(u1, fs);  // F(u1)
  for (size_t i = 0; i < n; ++i)
    u2[i] = a20 * u[i] + a21 * u1[i] + b21 * dt * fs[i];
  rhs(u2, fs);  // F(u2)
  for (size_t i = 0; i < n; ++i)
    u3[i] = a30 * u[i] + a32 * u2[i] + b32 * dt * fs[i];
  rhs(u3, fs);  // F(u3), reused in the last stage
  for (size_t i = 0; i < n; ++i)
    u4[i] = a40 * u[i] + a43 * u3[i] + b43 * dt * fs[i];
  for (size_t i = 0; i < n; ++i)
    u1[i] = a52 * u2[i] + a53 * u3[i] + b53 * dt * fs[i] + a54 * u4[i];
  rhs(u4, fs);  // F(u4)
  for (size_t i = 0; i < n; ++i) u[i] = u1[i] + b54 * dt * fs[i];
}

/// dt = cfl * sqrt(sum_a h_a^2) / (k ||beta||_inf); falls back to dt_max for
/// a vanishing field (throws if dt_max is not set).
double cfl_timestep(const TensorMesh& mesh, const AdvectionField& beta,
                    double cfl, double dt_max = 0.0);

}  // namespace vprv
