#pragma once

#include <array>
#include <span>
#include <vector>

#include "vprv/fem.hpp"
#include "vprv/linsolve.hpp"
#include "vprv/mesh.hpp"

namespace vprv {

/// Electrostatic fields on the spatial mesh.
struct ElectrostaticState {
  std::vector<double> rho;
  double rho0 = 0.0;  // background charge, the volume average of rho
  std::vector<double> phi;
  std::vector<std::vector<double>> efield;  // one component per spatial axis
  SolveStats poisson_stats;
};

/// Mean-zero Poisson solve -lap phi = rho - rho0 with periodic boundaries,
/// followed by L2 recovery of E = -grad phi.  The singular stiffness system
/// is closed with the integral constraint int phi = 0 (Lagrange-multiplier
/// form reduced to CG on the zero-mean subspace).
class PoissonSolver {
 public:
  PoissonSolver(const TensorMesh& xmesh, double tol, int max_iterations);

  /// Solves for state.phi and state.efield from rho; previous contents of
  /// phi / efield are used as CG starting guesses.
  void solve(std::span<const double> rho, ElectrostaticState& state) const;

  ElectrostaticState make_state() const;

  const TensorMesh& mesh() const { return *mesh_; }
  const std::vector<double>& volume_weights() const { return weights_; }
  const SparseOperator& mass() const { return mass_; }
  const SparseOperator& stiffness() const { return stiffness_; }

  /// integral of |E|^2 over the spatial domain
  double field_energy(const ElectrostaticState& state) const;

 private:
  const TensorMesh* mesh_;
  Assembler asmb_;
  SparseOperator stiffness_;
  SparseOperator mass_;
  std::vector<SparseOperator> grad_;
  std::vector<double> weights_;
  double volume_ = 0.0;
  CGOptions opt_;
};

}  // namespace vprv
