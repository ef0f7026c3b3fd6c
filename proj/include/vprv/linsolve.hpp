#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vprv/fem.hpp"

namespace vprv {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;
};

struct CGOptions {
  double tol = 1e-12;       // on ||r|| / ||b||
  int max_iterations = 200000;
  bool project_mean = false;  // keep iterates on the zero-mean subspace
};

/// Unpreconditioned conjugate gradients for SPD operators.  `x` carries the
/// initial guess and receives the solution.  Throws SolverError on
/// non-convergence, reporting iteration count and final residual.
SolveStats cg_solve(const SparseOperator& A, std::span<const double> b,
                    std::vector<double>& x, const CGOptions& opt);

struct SaddleResult {
  SolveStats stats;
  double multiplier = 0.0;  // Lagrange multiplier absorbing the rhs mean
};

/// Solve the singular Neumann-type system K phi = rhs subject to the
/// mean-zero constraint sum_i w_i phi_i = 0, where K has the constant vector
/// in its null space and w are the basis integrals.  The bordered system is
/// reduced to CG on the zero-mean subspace; the multiplier equals the rhs
/// imbalance per unit volume.
///
/// A rhs whose mean exceeds 1e-6 of its own 1-norm is rejected as
/// incompatible unless the 1-norm itself is below `compat_floor`: a load
/// that is zero up to roundoff (e.g. from a spatially uniform source) has
/// no meaningful sign structure and is solved as-is.  Callers that know the
/// problem scale should pass a floor; 0 keeps the strict check.
SaddleResult saddle_solve(const SparseOperator& K, std::span<const double> w,
                          std::span<const double> rhs, std::vector<double>& phi,
                          const CGOptions& opt, double compat_floor = 0.0);

// small dense helpers shared with the test oracles
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace vprv
