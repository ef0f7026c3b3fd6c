#include "vprv/stabilization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vprv {

StabilizationMode stabilization_from_string(const std::string& s) {
  if (s == "none") return StabilizationMode::none;
  if (s == "low_order") return StabilizationMode::low_order;
  if (s == "rv") return StabilizationMode::rv;
  if (s == "rv_isotropic") return StabilizationMode::rv_isotropic;
  throw std::invalid_argument("unknown stabilization mode: " + s);
}

std::string to_string(StabilizationMode m) {
  switch (m) {
    case StabilizationMode::none:
      return "none";
    case StabilizationMode::low_order:
      return "low_order";
    case StabilizationMode::rv:
      return "rv";
    case StabilizationMode::rv_isotropic:
      return "rv_isotropic";
  }
  return "?";
}

ViscosityField low_order_viscosity(const TensorMesh& mesh,
                                   const AdvectionField& beta) {
  ViscosityField out = ViscosityField::zero(mesh);
  const int k = mesh.degree();
  for (int a = 0; a < mesh.dim(); ++a) {
    const double scale = 0.5 * mesh.axis(a).h / k;
    std::vector<double>& eps = out.eps[a];
    std::vector<double> nodal(mesh.total_nodes());
    for (long i = 0; i < mesh.total_nodes(); ++i)
      nodal[i] = std::abs(beta.at_node(mesh, a, i));
    for (long i = 0; i < mesh.total_nodes(); ++i) {
      double m = 0.0;
      for (int j : mesh.patch(i)) m = std::max(m, nodal[j]);
      eps[i] = scale * m;
    }
  }
  return out;
}

ViscosityField isotropic_viscosity(const TensorMesh& mesh,
                                   const AdvectionField& beta) {
  ViscosityField out = ViscosityField::zero(mesh);
  double hmin = mesh.axis(0).h;
  for (int a = 1; a < mesh.dim(); ++a) hmin = std::min(hmin, mesh.axis(a).h);
  std::vector<double> nodal(mesh.total_nodes());
  for (long i = 0; i < mesh.total_nodes(); ++i) {
    double s = 0.0;
    for (int a = 0; a < mesh.dim(); ++a) {
      double v = beta.at_node(mesh, a, i);
      s += v * v;
    }
    nodal[i] = std::sqrt(s);
  }
  for (long i = 0; i < mesh.total_nodes(); ++i) {
    double m = 0.0;
    for (int j : mesh.patch(i)) m = std::max(m, nodal[j]);
    double eps = 0.5 * hmin * m;
    for (int a = 0; a < mesh.dim(); ++a) out.eps[a][i] = eps;
  }
  return out;
}

std::vector<double> bdf_combination(std::span<const double> f,
                                    std::span<const double> f1,
                                    std::span<const double> f2, double dt,
                                    bool bdf2) {
  std::vector<double> g(f.size());
  if (bdf2) {
    const double c = 1.0 / (2.0 * dt);
    for (size_t i = 0; i < f.size(); ++i)
      g[i] = c * (3.0 * f[i] - 4.0 * f1[i] + f2[i]);
  } else {
    for (size_t i = 0; i < f.size(); ++i) g[i] = (f[i] - f1[i]) / dt;
  }
  return g;
}

ResidualProjector::ResidualProjector(const Assembler& asmb, double tol,
                                     int max_iterations)
    : asmb_(&asmb) {
  opt_.tol = tol;
  opt_.max_iterations = max_iterations;
  const TensorMesh& mesh = asmb.mesh();
  system_ = asmb.create();
  SparseOperator smoother = asmb.create();
  asmb.mass(system_);
  std::vector<double> coeff(mesh.dim());
  for (int a = 0; a < mesh.dim(); ++a) {
    double h = mesh.axis(a).h;
    coeff[a] = h * h / mesh.degree();
  }
  asmb.diffusion(coeff, smoother);
  for (size_t i = 0; i < system_.values().size(); ++i)
    system_.values()[i] += smoother.values()[i];
  lumped_ = asmb.lumped_mass();
}

void ResidualProjector::project(const AdvectionField& beta,
                                std::span<const double> f,
                                std::span<const double> g,
                                std::vector<double>& r) const {
  std::vector<double> rhs(f.size());
  asmb_->residual_load(beta, f, g, rhs);
  r.assign(f.size(), 0.0);
  for (size_t i = 0; i < f.size(); ++i) r[i] = rhs[i] / lumped_[i];
  cg_solve(system_, rhs, r, opt_);
}

Normalization residual_normalization(const TensorMesh& mesh,
                                     std::span<const double> lumped,
                                     std::span<const double> f) {
  Normalization out;
  const long n = mesh.total_nodes();

  double total = 0.0, volume = 0.0;
  for (long i = 0; i < n; ++i) {
    total += lumped[i] * f[i];
    volume += lumped[i];
  }
  const double fbar = total / volume;

  out.centered_norm = 0.0;
  for (long i = 0; i < n; ++i)
    out.centered_norm = std::max(out.centered_norm, std::abs(f[i] - fbar));

  out.global_max = *std::max_element(f.begin(), f.end());
  out.global_min = *std::min_element(f.begin(), f.end());
  const double range = out.global_max - out.global_min;

  out.n.assign(n, 0.0);
  for (long i = 0; i < n; ++i) {
    double pmax = f[i], pmin = f[i];
    for (int j : mesh.patch(i)) {
      pmax = std::max(pmax, f[j]);
      pmin = std::min(pmin, f[j]);
    }
    double alpha = range > 0.0 ? (pmax - pmin) / range : 0.0;
    out.n[i] = (1.0 - 0.5 * alpha) * out.centered_norm;
  }
  return out;
}

ViscosityField high_order_viscosity(const TensorMesh& mesh,
                                    const ViscosityField& low,
                                    std::span<const double> r,
                                    std::span<const double> n, bool isotropic) {
  ViscosityField out = ViscosityField::zero(mesh);
  const int k = mesh.degree();
  double hmin = mesh.axis(0).h;
  for (int a = 1; a < mesh.dim(); ++a) hmin = std::min(hmin, mesh.axis(a).h);
  for (int a = 0; a < mesh.dim(); ++a) {
    double s = (isotropic ? hmin : mesh.axis(a).h) / k;
    double s2 = s * s;
    for (long i = 0; i < mesh.total_nodes(); ++i) {
      double res = s2 * std::abs(r[i]) * n[i] / (n[i] * n[i] + residual_guard);
      out.eps[a][i] = std::min(low.eps[a][i], res);
    }
  }
  return out;
}

}  // namespace vprv
