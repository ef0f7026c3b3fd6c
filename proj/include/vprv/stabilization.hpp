#pragma once

#include <span>
#include <string>
#include <vector>

#include "vprv/fem.hpp"
#include "vprv/linsolve.hpp"
#include "vprv/mesh.hpp"

namespace vprv {

enum class StabilizationMode { none, low_order, rv, rv_isotropic };

StabilizationMode stabilization_from_string(const std::string& s);
std::string to_string(StabilizationMode m);

/// First-order bound: eps_a(i) = (h_a / 2k) max over the patch of |beta_a|.
ViscosityField low_order_viscosity(const TensorMesh& mesh,
                                   const AdvectionField& beta);

/// Direction-blind variant: every component gets (h_min / 2) max over the
/// patch of the Euclidean norm |beta|.
ViscosityField isotropic_viscosity(const TensorMesh& mesh,
                                   const AdvectionField& beta);

/// Nodal BDF time-difference combination entering the residual:
/// (3 f^n - 4 f^{n-1} + f^{n-2}) / (2 dt), or the BDF1 fallback
/// (f^n - f^{n-1}) / dt when the last two step sizes disagree.
std::vector<double> bdf_combination(std::span<const double> f,
                                    std::span<const double> f1,
                                    std::span<const double> f2, double dt,
                                    bool bdf2);

/// Smoothed L2 projection of the residual magnitude: solves
///   (R, psi) + sum_a (h_a^2 / k) (d_a R, d_a psi) = (|g_h + beta.grad f_h|, psi).
class ResidualProjector {
 public:
  ResidualProjector(const Assembler& asmb, double tol, int max_iterations);

  void project(const AdvectionField& beta, std::span<const double> f,
               std::span<const double> g, std::vector<double>& r) const;

 private:
  const Assembler* asmb_;
  SparseOperator system_;
  std::vector<double> lumped_;
  CGOptions opt_;
};

struct Normalization {
  std::vector<double> n;  // per node: (1 - alpha_i / 2) ||f - fbar||_inf
  double global_max = 0.0;
  double global_min = 0.0;
  // Sup norm of f - fbar over the nodes.  The normalization must carry the
  // amplitude of f (its units), not an integral norm: an L2 norm would drag a
  // sqrt(volume) factor into the viscosity scale and make it domain-size
  // dependent.
  double centered_norm = 0.0;
};

/// Residual normalization with the patch-range weight
/// alpha_i = (patch range) / (global range), guarded to zero for flat fields.
/// `lumped` supplies the quadrature weights for the mean of f.
Normalization residual_normalization(const TensorMesh& mesh,
                                     std::span<const double> lumped,
                                     std::span<const double> f);

inline constexpr double residual_guard = 1e-14;

/// eps_a(i) = min(low_a(i), s_a^2 |R_i| n_i / (n_i^2 + guard)) with
/// s_a = h_a / k, or s_a = h_min / k for the isotropic variant.
ViscosityField high_order_viscosity(const TensorMesh& mesh,
                                    const ViscosityField& low,
                                    std::span<const double> r,
                                    std::span<const double> n, bool isotropic);

}  // namespace vprv
