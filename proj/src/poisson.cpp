#include "vprv/poisson.hpp"

#include <algorithm>
#include <cmath>

namespace vprv {

PoissonSolver::PoissonSolver(const TensorMesh& xmesh, double tol,
                             int max_iterations)
    : mesh_(&xmesh), asmb_(xmesh) {
  opt_.tol = tol;
  opt_.max_iterations = max_iterations;
  stiffness_ = asmb_.create();
  std::vector<double> unit(xmesh.dim(), 1.0);
  asmb_.diffusion(unit, stiffness_);
  mass_ = asmb_.create();
  asmb_.mass(mass_);
  for (int a = 0; a < xmesh.dim(); ++a) {
    grad_.emplace_back(asmb_.pattern());
    asmb_.axis_gradient(a, grad_.back());
  }
  weights_ = asmb_.lumped_mass();
  for (double w : weights_) volume_ += w;
}

ElectrostaticState PoissonSolver::make_state() const {
  ElectrostaticState s;
  const long n = mesh_->total_nodes();
  s.rho.assign(n, 0.0);
  s.phi.assign(n, 0.0);
  s.efield.assign(mesh_->dim(), std::vector<double>(n, 0.0));
  return s;
}

void PoissonSolver::solve(std::span<const double> rho,
                          ElectrostaticState& state) const {
  const long n = mesh_->total_nodes();
  state.rho.assign(rho.begin(), rho.end());

  double charge = 0.0;
  for (long i = 0; i < n; ++i) charge += weights_[i] * rho[i];
  state.rho0 = charge / volume_;

  std::vector<double> source(n), load(n);
  double amp = 0.0;
  for (long i = 0; i < n; ++i) {
    source[i] = rho[i] - state.rho0;
    amp = std::max(amp, std::abs(rho[i]));
  }
  mass_.multiply(source, load);

  // a uniform density cancels to a load that is pure roundoff; tell the
  // saddle solver how small "numerically zero" is for this problem so the
  // incompatibility check does not trip on it
  double floor = 1e-12 * volume_ * (1.0 + amp);
  SaddleResult sr =
      saddle_solve(stiffness_, weights_, load, state.phi, opt_, floor);
  state.poisson_stats = sr.stats;

  // E_a solves M E_a = -G_a phi
  std::vector<double> rhs(n);
  for (int a = 0; a < mesh_->dim(); ++a) {
    grad_[a].multiply(state.phi, rhs);
    for (long i = 0; i < n; ++i) rhs[i] = -rhs[i];
    cg_solve(mass_, rhs, state.efield[a], opt_);
  }
}

double PoissonSolver::field_energy(const ElectrostaticState& state) const {
  std::vector<double> tmp(mesh_->total_nodes());
  double total = 0.0;
  for (int a = 0; a < mesh_->dim(); ++a) {
    mass_.multiply(state.efield[a], tmp);
    total += dot(state.efield[a], tmp);
  }
  return total;
}

}  // namespace vprv
