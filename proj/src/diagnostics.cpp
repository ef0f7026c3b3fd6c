#include "vprv/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace vprv {

ErrorNorms error_norms(const Assembler& asmb, std::span<const double> f,
                       std::span<const double> ref) {
  ErrorNorms n;
  std::vector<double> diff(f.size());
  for (size_t i = 0; i < f.size(); ++i) {
    diff[i] = f[i] - ref[i];
    n.linf = std::max(n.linf, std::abs(diff[i]));
  }
  double l2sq = 0.0;
  asmb.quadrature_scan(diff, [&](const double*, double v, double w) {
    n.l1 += w * std::abs(v);
    l2sq += w * v * v;
  });
  n.l2 = std::sqrt(l2sq);
  return n;
}

std::vector<double> convergence_rates(std::span<const double> errors) {
  std::vector<double> r;
  for (size_t i = 0; i + 1 < errors.size(); ++i)
    r.push_back(std::log2(errors[i] / errors[i + 1]));
  return r;
}

double field_energy_log(double energy, double floor_log) {
  if (!(energy > 0.0)) return floor_log;
  double v = 0.5 * std::log(energy);
  return v < floor_log ? floor_log : v;
}

DampingFit fit_damping_rate(std::span<const double> t,
                            std::span<const double> e, int use_maxima) {
  if (t.size() != e.size() || t.size() < 3)
    throw std::invalid_argument("fit_damping_rate: series too short");
  DampingFit fit;
  for (size_t i = 1; i + 1 < e.size(); ++i) {
    if (e[i] > e[i - 1] && e[i] > e[i + 1]) {
      fit.t_max.push_back(t[i]);
      fit.e_max.push_back(e[i]);
      if (static_cast<int>(fit.t_max.size()) == use_maxima) break;
    }
  }
  fit.maxima_used = static_cast<int>(fit.t_max.size());
  if (fit.maxima_used < 2)
    throw std::invalid_argument("fit_damping_rate: fewer than two maxima");
  double st = 0.0, se = 0.0, stt = 0.0, ste = 0.0;
  for (int i = 0; i < fit.maxima_used; ++i) {
    st += fit.t_max[i];
    se += fit.e_max[i];
    stt += fit.t_max[i] * fit.t_max[i];
    ste += fit.t_max[i] * fit.e_max[i];
  }
  double m = fit.maxima_used;
  double slope = (m * ste - st * se) / (m * stt - st * st);
  fit.rate = -slope;
  return fit;
}

double relative_deviation(double q, double q0, double fallback_scale) {
  double scale = std::abs(q0) > 1e-10 * std::abs(fallback_scale)
                     ? std::abs(q0)
                     : std::abs(fallback_scale);
  return (q - q0) / scale;
}

}  // namespace vprv
