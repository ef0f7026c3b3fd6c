#pragma once

#include <span>
#include <vector>

#include "vprv/fem.hpp"

namespace vprv {

struct ErrorNorms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

/// Norms of f - ref: L1/L2 by element quadrature of the interpolated
/// difference, Linf over nodes.
ErrorNorms error_norms(const Assembler& asmb, std::span<const double> f,
                       std::span<const double> ref);

/// log2(e_coarse / e_fine) for successive grid halvings.
std::vector<double> convergence_rates(std::span<const double> errors);

/// E_e = ln sqrt(int |E|^2); returns floor_log for a vanishing field.
double field_energy_log(double energy, double floor_log = -745.0);

struct DampingFit {
  double rate = 0.0;  // decay rate, positive for damping
  int maxima_used = 0;
  std::vector<double> t_max, e_max;
};

/// Least-squares line through the first `use_maxima` local maxima of the
/// series e(t); rate is the negated slope.
DampingFit fit_damping_rate(std::span<const double> t,
                            std::span<const double> e, int use_maxima = 5);

/// Relative drift (q - q0) / q0; falls back to scaling by `fallback_scale`
/// when q0 is numerically zero (signed momentum).
double relative_deviation(double q, double q0, double fallback_scale);

}  // namespace vprv
