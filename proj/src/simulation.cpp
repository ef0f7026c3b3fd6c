#include "vprv/simulation.hpp"

#include <cmath>

namespace vprv {

Model model_from_string(const std::string& s) {
  if (s == "vlasov_poisson") return Model::vlasov_poisson;
  if (s == "guiding_center") return Model::guiding_center;
  throw std::invalid_argument("unknown model: " + s);
}

std::string to_string(Model m) {
  return m == Model::vlasov_poisson ? "vlasov_poisson" : "guiding_center";
}

VlasovSystem::VlasovSystem(Model model, const TensorMesh& phase,
                           StabilizationMode mode, const SolverParams& params)
    : model_(model),
      mode_(mode),
      params_(params),
      phase_(&phase),
      asmb_(phase, 0, params.workers) {
  if (model == Model::vlasov_poisson) {
    if (phase.dim() != 2 || phase.velocity_axes() != 1)
      throw std::invalid_argument(
          "vlasov_poisson needs a phase mesh with axes [x, v]");
    const Axis& ax = phase.axis(0);
    AxisSpec spec{ax.lo, ax.hi, ax.elements, ax.periodic};
    xmesh_owned_ = std::make_unique<TensorMesh>(std::span(&spec, 1),
                                                phase.degree(), 1);
    xmesh_ = xmesh_owned_.get();
    reduction_ = std::make_unique<ChargeReduction>(phase);
  } else {
    if (phase.velocity_axes() != 0)
      throw std::invalid_argument(
          "guiding_center advects a purely spatial mesh");
    xmesh_ = phase_;
  }
  poisson_ = std::make_unique<PoissonSolver>(*xmesh_, params.poisson_tol,
                                             params.max_iterations);
  mass_ = asmb_.create();
  asmb_.mass(mass_);
  lumped_ = asmb_.lumped_mass();
  adv_ = asmb_.create();
  diff_ = asmb_.create();
  if (mode_ == StabilizationMode::rv || mode_ == StabilizationMode::rv_isotropic)
    projector_ = std::make_unique<ResidualProjector>(asmb_, params.residual_tol,
                                                     params.max_iterations);
  stage_es_ = poisson_->make_state();
  rho_.resize(xmesh_->total_nodes());
  y_.resize(phase.total_nodes());
  last_eps_ = ViscosityField::zero(phase);
}

VlasovSystem::State VlasovSystem::make_state(std::span<const double> f0) const {
  State s;
  s.f.assign(f0.begin(), f0.end());
  s.f1.assign(f0.size(), 0.0);
  s.f2.assign(f0.size(), 0.0);
  s.es = poisson_->make_state();
  return s;
}

void VlasovSystem::reduce(std::span<const double> f,
                          std::vector<double>& rho) const {
  if (model_ == Model::vlasov_poisson) {
    reduction_->apply(f, rho);
  } else {
    rho.assign(f.begin(), f.end());
  }
}

void VlasovSystem::refresh_fields(State& s) const {
  if (s.es_fresh) return;
  std::vector<double> rho(xmesh_->total_nodes());
  reduce(s.f, rho);
  poisson_->solve(rho, s.es);
  s.es_fresh = true;
}

AdvectionField VlasovSystem::advection_from(const ElectrostaticState& es) const {
  AdvectionField beta;
  if (model_ == Model::vlasov_poisson) {
    beta.comp.push_back(AdvectionComponent::coordinate(1));
    beta.comp.push_back(AdvectionComponent::axis_field(0, es.efield[0]));
  } else {
    std::vector<double> neg(es.efield[0]);
    for (double& v : neg) v = -v;
    beta.comp.push_back(AdvectionComponent::node_field(es.efield[1]));
    beta.comp.push_back(AdvectionComponent::node_field(std::move(neg)));
  }
  return beta;
}

Moments VlasovSystem::moments(std::span<const double> f) const {
  return compute_moments(asmb_, f, lumped_);
}

double VlasovSystem::field_energy(const ElectrostaticState& es) const {
  return poisson_->field_energy(es);
}

ViscosityField VlasovSystem::compute_viscosity(State& s,
                                               const AdvectionField& beta0) {
  const bool iso = mode_ == StabilizationMode::rv_isotropic;
  ViscosityField low = iso ? isotropic_viscosity(*phase_, beta0)
                           : low_order_viscosity(*phase_, beta0);
  if (mode_ == StabilizationMode::low_order) return low;
  if (s.history < 2) return low;  // startup steps fall back to first order

  const bool bdf2 =
      std::abs(s.dt_now - s.dt_prev) <= params_.bdf_ratio_tol * s.dt_now;
  std::vector<double> g = bdf_combination(s.f, s.f1, s.f2, s.dt_now, bdf2);
  std::vector<double> r;
  projector_->project(beta0, s.f, g, r);
  Normalization nrm = residual_normalization(*phase_, lumped_, s.f);
  return high_order_viscosity(*phase_, low, r, nrm.n, iso);
}

void VlasovSystem::rhs_stage(const std::vector<double>& u,
                             std::vector<double>& out) {
  if (stage_ > 0) {
    reduce(u, rho_);
    poisson_->solve(rho_, stage_es_);
    if (info_)
      info_->poisson_iterations = std::max(
          info_->poisson_iterations, stage_es_.poisson_stats.iterations);
    AdvectionField beta = advection_from(stage_es_);
    asmb_.advection(beta, adv_);
  }
  ++stage_;

  adv_.multiply(u, y_);
  if (diff_active_) diff_.multiply_add(u, y_);

  out.resize(u.size());
  for (size_t i = 0; i < u.size(); ++i) out[i] = y_[i] / lumped_[i];
  if (!params_.lumped_mass) {
    CGOptions o;
    o.tol = params_.mass_tol;
    o.max_iterations = params_.max_iterations;
    SolveStats st = cg_solve(mass_, y_, out, o);
    if (info_)
      info_->mass_iterations = std::max(info_->mass_iterations, st.iterations);
  }
  for (double& v : out) v = -v;
}

StepInfo VlasovSystem::step(State& s, double dt_limit) {
  try {
    return step_impl(s, dt_limit);
  } catch (const SolverError& e) {
    info_ = nullptr;
    throw SolverError("step " + std::to_string(s.step + 1) + ", t = " +
                      std::to_string(s.time) + ": " + e.what());
  }
}

StepInfo VlasovSystem::step_impl(State& s, double dt_limit) {
  // catch a poisoned state before it reaches the field solve, where a NaN
  // density would surface as a linear-solver failure instead
  for (double v : s.f)
    if (!std::isfinite(v))
      throw NanAbort("state non-finite entering step " +
                     std::to_string(s.step + 1) + ", t = " +
                     std::to_string(s.time));

  refresh_fields(s);
  AdvectionField beta0 = advection_from(s.es);
  double dt = cfl_timestep(*phase_, beta0, params_.cfl, params_.dt_max);
  if (dt_limit > 0.0) dt = std::min(dt, dt_limit);

  StepInfo info;
  info.dt = dt;
  info.poisson_iterations = s.es.poisson_stats.iterations;

  diff_active_ = mode_ != StabilizationMode::none;
  if (diff_active_) {
    ViscosityField eps = compute_viscosity(s, beta0);
    asmb_.diffusion(eps, diff_);
    for (int a = 0; a < phase_->dim(); ++a) {
      double m = eps.max_entry(a);
      if (a < phase_->spatial_axes())
        info.max_eps_x = std::max(info.max_eps_x, m);
      else
        info.max_eps_v = std::max(info.max_eps_v, m);
    }
    last_eps_ = std::move(eps);
  }

  asmb_.advection(beta0, adv_);
  stage_ = 0;
  info_ = &info;

  s.f2.swap(s.f1);
  s.f1 = s.f;

  auto rhs = [this](const std::vector<double>& u, std::vector<double>& out) {
    rhs_stage(u, out);
  };
  ssprk54_step(rhs, s.f, dt, work_);
  info_ = nullptr;

  for (double v : s.f)
    if (!std::isfinite(v))
      throw NanAbort("solution lost finiteness at step " +
                     std::to_string(s.step + 1) + ", t = " +
                     std::to_string(s.time + dt));

  s.dt_prev = s.dt_now;
  s.dt_now = dt;
  s.history = std::min(s.history + 1, 2);
  s.time += dt;
  s.step += 1;
  s.es_fresh = false;
  return info;
}

void advance_to(VlasovSystem& sys, VlasovSystem::State& s, double t_end) {
  const double eps = 1e-12 * std::max(1.0, std::abs(t_end));
  while (s.time < t_end - eps) sys.step(s, t_end - s.time);
}

}  // namespace vprv
