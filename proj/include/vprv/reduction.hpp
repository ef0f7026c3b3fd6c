#pragma once

#include <span>
#include <vector>

#include "vprv/fem.hpp"
#include "vprv/mesh.hpp"

namespace vprv {

/// Velocity-average reduction rho_i = sum_j w_j f_{i,j} on a phase-space mesh
/// with axes [x, v].  The weights are the exact integrals of the v-basis, so
/// the reduction of g(x) p(v) with p in Q_k is exact; globally they reproduce
/// composite trapezoid (Q1), Simpson (Q2) and Newton-Cotes 3/8 (Q3) rules.
class ChargeReduction {
 public:
  explicit ChargeReduction(const TensorMesh& phase);

  void apply(std::span<const double> f, std::span<double> rho) const;
  const std::vector<double>& weights() const { return w_; }

 private:
  int nx_ = 0, nv_ = 0;
  std::vector<double> w_;
};

struct Moments {
  double mass = 0.0;      // integral of f
  double momentum = 0.0;  // integral of f v
  double kinetic = 0.0;   // integral of f v^2 / 2
  double l2sq = 0.0;      // integral of f^2
};

/// Phase-space moments of the interpolant; mass via lumped weights, the rest
/// via full quadrature with the v coordinate taken at the quadrature points.
Moments compute_moments(const Assembler& asmb, std::span<const double> f,
                        std::span<const double> lumped);

}  // namespace vprv
