#include "vprv/linsolve.hpp"

#include <cmath>

namespace vprv {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

namespace {

void subtract_mean(std::span<double> v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  for (double& x : v) x -= m;
}

}  // namespace

SolveStats cg_solve(const SparseOperator& A, std::span<const double> b,
                    std::vector<double>& x, const CGOptions& opt) {
  const size_t n = b.size();
  if (x.size() != n || static_cast<size_t>(A.rows()) != n)
    throw SolverError("cg: dimension mismatch");

  double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return {0, 0.0};
  }

  std::vector<double> r(n), p(n), Ap(n);
  A.multiply(x, Ap);
  for (size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
  if (opt.project_mean) subtract_mean(r);
  p = r;
  double rr = dot(r, r);
  if (!std::isfinite(rr))
    throw SolverError("cg: non-finite residual in the initial guess or rhs");
  double target = opt.tol * bnorm;
  SolveStats stats;
  stats.residual = std::sqrt(rr);
  if (stats.residual <= target) return stats;

  for (int it = 0; it < opt.max_iterations; ++it) {
    A.multiply(p, Ap);
    double pAp = dot(p, Ap);
    if (pAp <= 0.0)
      throw SolverError("cg: operator not positive definite (p^T A p = " +
                        std::to_string(pAp) + ")");
    double alpha = rr / pAp;
    for (size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    if (opt.project_mean) subtract_mean(r);
    double rr_next = dot(r, r);
    if (!std::isfinite(rr_next))
      throw SolverError("cg: residual lost finiteness at iteration " +
                        std::to_string(it + 1));
    stats.iterations = it + 1;
    stats.residual = std::sqrt(rr_next);
    if (stats.residual <= target) return stats;
    double beta = rr_next / rr;
    rr = rr_next;
    for (size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  throw SolverError("cg: no convergence after " +
                    std::to_string(stats.iterations) + " iterations, ||r|| = " +
                    std::to_string(stats.residual) + ", target " +
                    std::to_string(target));
}

SaddleResult saddle_solve(const SparseOperator& K, std::span<const double> w,
                          std::span<const double> rhs, std::vector<double>& phi,
                          const CGOptions& opt, double compat_floor) {
  const size_t n = rhs.size();
  if (phi.size() != n || w.size() != n)
    throw SolverError("saddle: dimension mismatch");

  double volume = 0.0;
  for (double wi : w) volume += wi;
  double imbalance = 0.0;
  for (double f : rhs) imbalance += f;

  SaddleResult res;
  res.multiplier = imbalance / volume;

  double scale = 0.0;
  for (double f : rhs) scale += std::abs(f);
  if (scale > compat_floor && std::abs(imbalance) > 1e-6 * scale)
    throw SolverError("saddle: incompatible rhs, mean imbalance " +
                      std::to_string(imbalance));

  // project rhs and initial guess onto the zero-mean subspace, run CG there
  std::vector<double> b(rhs.begin(), rhs.end());
  subtract_mean(b);
  subtract_mean(phi);
  CGOptions o = opt;
  o.project_mean = true;
  res.stats = cg_solve(K, b, phi, o);

  // enforce the weighted mean-zero constraint
  double shift = dot(w, phi) / volume;
  for (double& v : phi) v -= shift;
  return res;
}

}  // namespace vprv
