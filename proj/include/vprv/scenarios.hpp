#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "vprv/diagnostics.hpp"
#include "vprv/mesh.hpp"
#include "vprv/simulation.hpp"

namespace vprv {

/// A named benchmark: domain, default parameters and initial datum.
struct Preset {
  std::string name;
  Model model = Model::vlasov_poisson;
  AxisSpec x_axis, v_axis;  // v_axis doubles as the second spatial axis
  double alpha = 0.0;       // perturbation amplitude
  double theta = 0.0;       // perturbation wavenumber (lobe count for rings)
  double default_time = 10.0;
  std::function<double(double, double, double, double)> initial;  // (x, v, alpha, theta)
};

const std::vector<std::string>& preset_names();
Preset make_preset(const std::string& name);

/// Mesh over the preset's box with the given element counts.
TensorMesh make_mesh(const Preset& p, int elements_x, int elements_v,
                     int degree);

/// Nodal interpolation of the initial datum.
std::vector<double> initial_field(const TensorMesh& mesh, const Preset& p,
                                  double alpha, double theta);

struct FBResult {
  ErrorNorms errors;
  long steps = 0;
};

/// Reversibility protocol: run to T, reflect v, run to 2T, compare with the
/// reflected initial field.  The backward leg restarts its time history.
FBResult forward_backward(VlasovSystem& sys, std::span<const double> f0,
                          double T);

/// High-resolution forward solve whose v-reflected final state serves as
/// backward-leg initial data for the convergence study.
struct ReferenceSolution {
  std::shared_ptr<TensorMesh> mesh;
  std::vector<double> reflected;  // nodal values of f(x, -v, T)
  long steps = 0;
};

ReferenceSolution make_reference(const Preset& p, int elements_x,
                                 int elements_v, int degree,
                                 StabilizationMode mode,
                                 const SolverParams& params, double T);

/// Interpolates the reflected reference field onto another mesh's nodes.
std::vector<double> sample_reference(const ReferenceSolution& ref,
                                     const TensorMesh& dst);

struct StudyRow {
  int elements = 0;
  long nodes = 0;  // wrapped node count along x
  ErrorNorms errors;
  long steps = 0;
};

/// One backward leg of the convergence study: start from the interpolated
/// reflected reference, run to T, and compare against the reflection of the
/// closed-form initial datum (the exact solution of that leg).
StudyRow backward_leg(const Preset& p, int elements, int degree,
                      StabilizationMode mode, const SolverParams& params,
                      double T, const ReferenceSolution& ref);

/// Smallest element count whose degree-3 node grid contains every test
/// grid's nodes and at least doubles the finest one; 0 if no aligned count
/// below the cap exists.
int reference_elements_for(const std::vector<int>& grids, int degree);

}  // namespace vprv
