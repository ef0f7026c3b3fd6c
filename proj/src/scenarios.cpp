#include "vprv/scenarios.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "vprv/fem.hpp"

namespace vprv {

namespace {

const double inv_sqrt2pi = 1.0 / std::sqrt(2.0 * M_PI);

double maxwellian(double v) { return inv_sqrt2pi * std::exp(-0.5 * v * v); }

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "landau", "two_stream", "two_stream_multivortex", "bump_on_tail",
      "guiding_center"};
  return names;
}

Preset make_preset(const std::string& name) {
  Preset p;
  p.name = name;
  if (name == "landau") {
    p.x_axis = {0.0, 4.0 * M_PI, 1, true};
    p.v_axis = {-6.0, 6.0, 1, true};
    p.alpha = 0.01;
    p.theta = 0.5;
    p.default_time = 60.0;
    p.initial = [](double x, double v, double a, double th) {
      return maxwellian(v) * (1.0 + a * std::cos(th * x));
    };
  } else if (name == "two_stream") {
    p.x_axis = {0.0, 4.0 * M_PI, 1, true};
    p.v_axis = {-5.0, 5.0, 1, true};
    p.alpha = 0.01;
    p.theta = 0.5;
    p.default_time = 50.0;
    p.initial = [](double x, double v, double a, double th) {
      return maxwellian(v) * v * v * (1.0 + a * std::cos(th * x));
    };
  } else if (name == "two_stream_multivortex") {
    p.x_axis = {0.0, 13.0 * M_PI, 1, true};
    p.v_axis = {-5.0, 5.0, 1, true};
    p.alpha = 0.05;
    p.theta = 2.0 / 13.0;
    p.default_time = 400.0;
    p.initial = [](double x, double v, double a, double th) {
      const double u = 0.99, vth = 0.3;
      double g = std::exp(-0.5 * (v - u) * (v - u) / (vth * vth)) +
                 std::exp(-0.5 * (v + u) * (v + u) / (vth * vth));
      return inv_sqrt2pi / (2.0 * vth) * g * (1.0 + a * std::cos(th * x));
    };
  } else if (name == "bump_on_tail") {
    p.x_axis = {0.0, 20.0 * M_PI, 1, true};
    p.v_axis = {-8.0, 8.0, 1, true};
    p.alpha = 0.04;
    p.theta = 0.3;
    p.default_time = 100.0;
    p.initial = [](double x, double v, double a, double th) {
      double d = inv_sqrt2pi * (0.9 * std::exp(-0.5 * v * v) +
                                0.2 * std::exp(-2.0 * (v - 4.5) * (v - 4.5)));
      return d * (1.0 + a * std::cos(th * x));
    };
  } else if (name == "guiding_center") {
    p.model = Model::guiding_center;
    p.x_axis = {-15.0, 15.0, 1, true};
    p.v_axis = {-15.0, 15.0, 1, true};
    p.alpha = 0.1;
    p.theta = 6.0;
    p.default_time = 100.0;
    p.initial = [](double x, double y, double a, double th) {
      double r = std::sqrt(x * x + y * y);
      if (r < 5.0 || r > 8.0) return 0.0;
      double angle = std::atan2(y, x);
      return (1.0 + a * std::cos(th * angle)) *
             std::exp(-4.0 * (r - 6.5) * (r - 6.5));
    };
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return p;
}

TensorMesh make_mesh(const Preset& p, int elements_x, int elements_v,
                     int degree) {
  AxisSpec specs[2] = {p.x_axis, p.v_axis};
  specs[0].elements = elements_x;
  specs[1].elements = elements_v;
  int spatial = p.model == Model::guiding_center ? 2 : 1;
  return TensorMesh(specs, degree, spatial);
}

std::vector<double> initial_field(const TensorMesh& mesh, const Preset& p,
                                  double alpha, double theta) {
  std::vector<double> f(mesh.total_nodes());
  double c[max_axes];
  for (long n = 0; n < mesh.total_nodes(); ++n) {
    mesh.coords(n, c);
    f[n] = p.initial(c[0], c[1], alpha, theta);
  }
  return f;
}

FBResult forward_backward(VlasovSystem& sys, std::span<const double> f0,
                          double T) {
  FBResult out;
  VlasovSystem::State s = sys.make_state(f0);
  advance_to(sys, s, T);
  out.steps += s.step;

  std::vector<int> perm = sys.phase_mesh().reflection_map(1);
  std::vector<double> reflected = apply_permutation(perm, s.f);
  VlasovSystem::State back = sys.make_state(reflected);
  advance_to(sys, back, T);
  out.steps += back.step;

  std::vector<double> reference = apply_permutation(perm, f0);
  out.errors = error_norms(sys.assembler(), back.f, reference);
  return out;
}

ReferenceSolution make_reference(const Preset& p, int elements_x,
                                 int elements_v, int degree,
                                 StabilizationMode mode,
                                 const SolverParams& params, double T) {
  ReferenceSolution ref;
  ref.mesh = std::make_shared<TensorMesh>(
      make_mesh(p, elements_x, elements_v, degree));
  VlasovSystem sys(p.model, *ref.mesh, mode, params);
  std::vector<double> f0 = initial_field(*ref.mesh, p, p.alpha, p.theta);
  VlasovSystem::State s = sys.make_state(f0);
  advance_to(sys, s, T);
  ref.steps = s.step;
  ref.reflected = apply_permutation(ref.mesh->reflection_map(1), s.f);
  return ref;
}

std::vector<double> sample_reference(const ReferenceSolution& ref,
                                     const TensorMesh& dst) {
  std::vector<double> out(dst.total_nodes());
  double c[max_axes];
  for (long n = 0; n < dst.total_nodes(); ++n) {
    dst.coords(n, c);
    out[n] = eval_field(*ref.mesh, ref.reflected, c);
  }
  return out;
}

StudyRow backward_leg(const Preset& p, int elements, int degree,
                      StabilizationMode mode, const SolverParams& params,
                      double T, const ReferenceSolution& ref) {
  StudyRow row;
  row.elements = elements;
  TensorMesh mesh = make_mesh(p, elements, elements, degree);
  row.nodes = mesh.axis(0).nodes;
  VlasovSystem sys(p.model, mesh, mode, params);
  std::vector<double> init = sample_reference(ref, mesh);
  VlasovSystem::State s = sys.make_state(init);
  advance_to(sys, s, T);
  row.steps = s.step;
  std::vector<double> f0 = initial_field(mesh, p, p.alpha, p.theta);
  std::vector<double> target = apply_permutation(mesh.reflection_map(1), f0);
  row.errors = error_norms(sys.assembler(), s.f, target);
  return row;
}

int reference_elements_for(const std::vector<int>& grids, int degree) {
  long lcm = 1;
  long finest = 0;
  for (int e : grids) {
    long n = static_cast<long>(degree) * e;
    finest = std::max(finest, n);
    lcm = std::lcm(lcm, n);
    if (lcm > 100000) return 0;
  }
  long nodes = lcm;
  while (nodes < 2 * finest || nodes % 3 != 0) {
    nodes += lcm;
    if (nodes > 100000) return 0;
  }
  return static_cast<int>(nodes / 3);
}

}  // namespace vprv
