#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vprv/fem.hpp"
#include "vprv/integrator.hpp"
#include "vprv/mesh.hpp"
#include "vprv/poisson.hpp"
#include "vprv/reduction.hpp"
#include "vprv/stabilization.hpp"

namespace vprv {

enum class Model { vlasov_poisson, guiding_center };

Model model_from_string(const std::string& s);
std::string to_string(Model m);

struct SolverParams {
  double cfl = 0.4;
  double mass_tol = 1e-12;
  double poisson_tol = 1e-12;
  double residual_tol = 1e-10;
  int max_iterations = 200000;
  bool lumped_mass = false;
  int workers = 1;
  double dt_max = 0.0;         // 0 disables the cap
  double bdf_ratio_tol = 0.1;  // step-size mismatch triggering BDF1 fallback
};

struct StepInfo {
  double dt = 0.0;
  double max_eps_x = 0.0;
  double max_eps_v = 0.0;
  int mass_iterations = 0;     // worst stage
  int poisson_iterations = 0;  // worst stage
};

/// Raised when the solution stops being finite.
class NanAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Method of lines for d f/dt + beta . grad f = 0 coupled to the mean-zero
/// Poisson solve, either as 1d1v Vlasov-Poisson (beta = (v, E)) or as the 2d
/// guiding-center model (beta = (E2, -E1), f advected is the charge itself).
/// Each SSP-RK(5,4) stage refreshes charge, fields and the advection
/// operator; the artificial viscosity and the step size freeze per step.
class VlasovSystem {
 public:
  VlasovSystem(Model model, const TensorMesh& phase, StabilizationMode mode,
               const SolverParams& params);

  struct State {
    double time = 0.0;
    long step = 0;
    std::vector<double> f;
    std::vector<double> f1, f2;  // previous two accepted solutions
    int history = 0;
    double dt_now = 0.0, dt_prev = 0.0;
    ElectrostaticState es;
    bool es_fresh = false;
  };

  State make_state(std::span<const double> f0) const;

  /// Advance one step; dt_limit > 0 caps the CFL step (used to land exactly
  /// on output times).
  StepInfo step(State& s, double dt_limit = 0.0);

  /// Recompute the electrostatic fields for the current f if stale.
  void refresh_fields(State& s) const;

  const TensorMesh& phase_mesh() const { return *phase_; }
  const TensorMesh& xmesh() const { return *xmesh_; }
  const Assembler& assembler() const { return asmb_; }
  const SparseOperator& mass() const { return mass_; }
  const std::vector<double>& lumped() const { return lumped_; }
  const PoissonSolver& poisson() const { return *poisson_; }
  Model model() const { return model_; }
  StabilizationMode mode() const { return mode_; }
  const SolverParams& params() const { return params_; }
  const ViscosityField& last_viscosity() const { return last_eps_; }

  Moments moments(std::span<const double> f) const;
  double field_energy(const ElectrostaticState& es) const;
  AdvectionField advection_from(const ElectrostaticState& es) const;

 private:
  void reduce(std::span<const double> f, std::vector<double>& rho) const;
  StepInfo step_impl(State& s, double dt_limit);
  void rhs_stage(const std::vector<double>& u,
                 std::vector<double>& out);
  ViscosityField compute_viscosity(State& s, const AdvectionField& beta0);

  Model model_;
  StabilizationMode mode_;
  SolverParams params_;
  const TensorMesh* phase_;
  std::unique_ptr<TensorMesh> xmesh_owned_;
  const TensorMesh* xmesh_;
  Assembler asmb_;
  SparseOperator mass_;
  std::vector<double> lumped_;
  std::unique_ptr<PoissonSolver> poisson_;
  std::unique_ptr<ChargeReduction> reduction_;
  std::unique_ptr<ResidualProjector> projector_;
  ViscosityField last_eps_;

  // per-step scratch
  SparseOperator adv_, diff_;
  bool diff_active_ = false;
  int stage_ = 0;
  StepInfo* info_ = nullptr;
  ElectrostaticState stage_es_;
  std::vector<double> rho_, y_;
  std::array<std::vector<double>, 5> work_;
};

/// Step until t_end, clipping the final steps to land exactly on it.
void advance_to(VlasovSystem& sys, VlasovSystem::State& s, double t_end);

}  // namespace vprv
