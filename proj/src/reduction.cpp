#include "vprv/reduction.hpp"

#include <stdexcept>

namespace vprv {

ChargeReduction::ChargeReduction(const TensorMesh& phase) {
  if (phase.dim() != 2 || phase.velocity_axes() != 1)
    throw std::invalid_argument(
        "reduction: needs a phase-space mesh with axes [x, v]");
  nx_ = phase.axis(0).nodes;
  nv_ = phase.axis(1).nodes;
  w_ = axis_integral_weights(phase.axis(1), phase.degree());
}

void ChargeReduction::apply(std::span<const double> f,
                            std::span<double> rho) const {
  for (int i = 0; i < nx_; ++i) {
    const double* fi = f.data() + static_cast<long>(i) * nv_;
    double s = 0.0;
    for (int j = 0; j < nv_; ++j) s += w_[j] * fi[j];
    rho[i] = s;
  }
}

Moments compute_moments(const Assembler& asmb, std::span<const double> f,
                        std::span<const double> lumped) {
  Moments m;
  for (size_t i = 0; i < f.size(); ++i) m.mass += lumped[i] * f[i];
  const int vaxis = asmb.mesh().spatial_axes();
  const bool has_v = vaxis < asmb.mesh().dim();
  asmb.quadrature_scan(f, [&](const double* x, double fv, double w) {
    double v = has_v ? x[vaxis] : 0.0;
    m.momentum += w * fv * v;
    m.kinetic += 0.5 * w * fv * v * v;
    m.l2sq += w * fv * fv;
  });
  return m;
}

}  // namespace vprv
