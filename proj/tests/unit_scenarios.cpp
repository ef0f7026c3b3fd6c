#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "vprv/fem.hpp"
#include "vprv/mesh.hpp"
#include "vprv/scenarios.hpp"
#include "vprv/simulation.hpp"

using namespace vprv;

TEST_CASE("preset catalogue") {
  CHECK(preset_names().size() == 5);
  for (const std::string& name : preset_names()) {
    Preset p = make_preset(name);
    CHECK(p.name == name);
    CHECK(p.default_time > 0.0);
  }
  CHECK_THROWS(make_preset("unknown"));
}

TEST_CASE("preset domains and initial data") {
  Preset landau = make_preset("landau");
  CHECK(landau.x_axis.hi == doctest::Approx(4.0 * M_PI));
  CHECK(landau.v_axis.lo == -6.0);
  CHECK(landau.model == Model::vlasov_poisson);
  double f = landau.initial(1.3, 0.4, landau.alpha, landau.theta);
  double expect = 1.0 / std::sqrt(2.0 * M_PI) * std::exp(-0.08) *
                  (1.0 + 0.01 * std::cos(0.65));
  CHECK(f == doctest::Approx(expect).epsilon(1e-13));

  Preset ts = make_preset("two_stream");
  double g = ts.initial(2.0, -1.1, ts.alpha, ts.theta);
  double ge = 1.0 / std::sqrt(2.0 * M_PI) * 1.21 * std::exp(-0.605) *
              (1.0 + 0.01 * std::cos(1.0));
  CHECK(g == doctest::Approx(ge).epsilon(1e-13));

  Preset gc = make_preset("guiding_center");
  CHECK(gc.model == Model::guiding_center);
  CHECK(gc.initial(0.0, 4.9, gc.alpha, gc.theta) == 0.0);
  CHECK(gc.initial(0.0, 8.1, gc.alpha, gc.theta) == 0.0);
  double ring = gc.initial(6.5, 0.0, gc.alpha, gc.theta);
  CHECK(ring == doctest::Approx(1.1).epsilon(1e-13));
}

TEST_CASE("mesh construction follows the preset box") {
  Preset p = make_preset("two_stream");
  for (int k = 1; k <= 3; ++k) {
    TensorMesh mesh = make_mesh(p, 12, 10, k);
    CHECK(mesh.degree() == k);
    CHECK(mesh.axis(0).elements == 12);
    CHECK(mesh.axis(1).elements == 10);
    CHECK(mesh.axis(0).nodes == 12 * k);
    CHECK(mesh.axis(0).lo == 0.0);
    CHECK(mesh.axis(1).hi == 5.0);
    CHECK(mesh.spatial_axes() == 1);
  }
  Preset gc = make_preset("guiding_center");
  TensorMesh gm = make_mesh(gc, 8, 8, 2);
  CHECK(gm.spatial_axes() == 2);
}

TEST_CASE("initial_field interpolates the datum") {
  Preset p = make_preset("bump_on_tail");
  TensorMesh mesh = make_mesh(p, 6, 8, 2);
  std::vector<double> f = initial_field(mesh, p, p.alpha, p.theta);
  REQUIRE(static_cast<long>(f.size()) == mesh.total_nodes());
  for (long i = 0; i < mesh.total_nodes(); i += 11) {
    double x[max_axes];
    mesh.coords(i, x);
    CHECK(f[i] == doctest::Approx(p.initial(x[0], x[1], p.alpha, p.theta))
                      .epsilon(1e-14));
  }
}

TEST_CASE("forward-backward with zero horizon is exact") {
  Preset p = make_preset("two_stream");
  TensorMesh mesh = make_mesh(p, 8, 8, 1);
  VlasovSystem sys(p.model, mesh, StabilizationMode::none, SolverParams{});
  std::vector<double> f0 = initial_field(mesh, p, p.alpha, p.theta);
  FBResult r = forward_backward(sys, f0, 0.0);
  CHECK(r.steps == 0);
  CHECK(r.errors.l2 < 1e-14);
  CHECK(r.errors.linf < 1e-14);
}

TEST_CASE("forward-backward runs and reports small errors") {
  Preset p = make_preset("two_stream");
  TensorMesh mesh = make_mesh(p, 8, 8, 1);
  VlasovSystem sys(p.model, mesh, StabilizationMode::none, SolverParams{});
  std::vector<double> f0 = initial_field(mesh, p, p.alpha, p.theta);
  FBResult r = forward_backward(sys, f0, 0.3);
  CHECK(r.steps > 0);
  CHECK(r.errors.l2 > 0.0);
  CHECK(r.errors.l2 < 1e-3);
}

TEST_CASE("reference with zero horizon reflects the initial datum") {
  Preset p = make_preset("two_stream");
  ReferenceSolution ref = make_reference(p, 6, 6, 2, StabilizationMode::none,
                                         SolverParams{}, 0.0);
  CHECK(ref.steps == 0);
  TensorMesh mesh = make_mesh(p, 6, 6, 2);
  std::vector<double> f0 = initial_field(mesh, p, p.alpha, p.theta);
  std::vector<double> expect =
      apply_permutation(mesh.reflection_map(1), f0);
  for (long i = 0; i < mesh.total_nodes(); ++i)
    CHECK(ref.reflected[i] == doctest::Approx(expect[i]).epsilon(1e-14));
}

TEST_CASE("sampling a reference onto its own mesh is the identity") {
  Preset p = make_preset("two_stream");
  ReferenceSolution ref = make_reference(p, 5, 5, 2, StabilizationMode::none,
                                         SolverParams{}, 0.0);
  std::vector<double> s = sample_reference(ref, *ref.mesh);
  for (size_t i = 0; i < s.size(); ++i)
    CHECK(s[i] == doctest::Approx(ref.reflected[i]).epsilon(1e-12));
}

TEST_CASE("stepping lands on the horizon and conserves mass") {
  Preset p = make_preset("landau");
  TensorMesh mesh = make_mesh(p, 8, 12, 2);
  VlasovSystem sys(p.model, mesh, StabilizationMode::rv, SolverParams{});
  auto s = sys.make_state(initial_field(mesh, p, p.alpha, p.theta));
  double m0 = 0.0;
  for (long i = 0; i < mesh.total_nodes(); ++i)
    m0 += sys.lumped()[i] * s.f[i];
  advance_to(sys, s, 0.5);
  CHECK(s.time == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s.step > 1);
  double m1 = 0.0;
  for (long i = 0; i < mesh.total_nodes(); ++i)
    m1 += sys.lumped()[i] * s.f[i];
  CHECK(std::abs(m1 - m0) / m0 < 1e-12);
}

TEST_CASE("unstabilized stepping reports zero viscosity") {
  Preset p = make_preset("landau");
  TensorMesh mesh = make_mesh(p, 6, 8, 1);
  VlasovSystem sys(p.model, mesh, StabilizationMode::none, SolverParams{});
  auto s = sys.make_state(initial_field(mesh, p, p.alpha, p.theta));
  StepInfo si = sys.step(s);
  CHECK(si.dt > 0.0);
  CHECK(si.max_eps_x == 0.0);
  CHECK(si.max_eps_v == 0.0);
}

TEST_CASE("low-order mode freezes the first-order bound") {
  Preset p = make_preset("landau");
  TensorMesh mesh = make_mesh(p, 6, 8, 1);
  VlasovSystem sys(p.model, mesh, StabilizationMode::low_order,
                   SolverParams{});
  auto s = sys.make_state(initial_field(mesh, p, p.alpha, p.theta));
  StepInfo si = sys.step(s);
  // beta = (v, E): the x bound is governed by max |v| = 6
  CHECK(si.max_eps_x ==
        doctest::Approx(mesh.axis(0).h / 2.0 * 6.0).epsilon(1e-12));
  CHECK(si.max_eps_v > 0.0);
}

TEST_CASE("a non-finite state aborts with NanAbort") {
  Preset p = make_preset("landau");
  TensorMesh mesh = make_mesh(p, 6, 6, 1);
  VlasovSystem sys(p.model, mesh, StabilizationMode::none, SolverParams{});
  auto s = sys.make_state(initial_field(mesh, p, p.alpha, p.theta));
  s.f[5] = std::nan("");
  CHECK_THROWS_AS(sys.step(s), NanAbort);
}

TEST_CASE("solver failures carry step context") {
  Preset p = make_preset("landau");
  SolverParams bad;
  bad.max_iterations = 1;  // mass solve cannot converge
  TensorMesh mesh = make_mesh(p, 8, 8, 2);
  VlasovSystem sys(p.model, mesh, StabilizationMode::none, bad);
  auto s = sys.make_state(initial_field(mesh, p, p.alpha, p.theta));
  try {
    sys.step(s);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(std::string(e.what()).find("step 1") != std::string::npos);
  }
}

TEST_CASE("guiding-center system advects the charge itself") {
  Preset p = make_preset("guiding_center");
  TensorMesh mesh = make_mesh(p, 12, 12, 1);
  VlasovSystem sys(p.model, mesh, StabilizationMode::none, SolverParams{});
  CHECK(&sys.xmesh() == &sys.phase_mesh());  // both spatial axes
  auto s = sys.make_state(initial_field(mesh, p, p.alpha, p.theta));
  sys.refresh_fields(s);
  // the reduction is the identity: rho equals f
  for (long i = 0; i < mesh.total_nodes(); i += 17)
    CHECK(s.es.rho[i] == doctest::Approx(s.f[i]).epsilon(1e-14));
  double m0 = 0.0;
  for (long i = 0; i < mesh.total_nodes(); ++i)
    m0 += sys.lumped()[i] * s.f[i];
  advance_to(sys, s, 0.4);
  double m1 = 0.0;
  for (long i = 0; i < mesh.total_nodes(); ++i)
    m1 += sys.lumped()[i] * s.f[i];
  CHECK(std::abs(m1 - m0) / m0 < 1e-12);
}

TEST_CASE("lumped mass option still conserves mass") {
  Preset p = make_preset("landau");
  SolverParams lumped_params;
  lumped_params.lumped_mass = true;
  TensorMesh mesh = make_mesh(p, 8, 8, 1);
  VlasovSystem sys(p.model, mesh, StabilizationMode::rv, lumped_params);
  auto s = sys.make_state(initial_field(mesh, p, p.alpha, p.theta));
  double m0 = 0.0;
  for (long i = 0; i < mesh.total_nodes(); ++i)
    m0 += sys.lumped()[i] * s.f[i];
  advance_to(sys, s, 0.3);
  double m1 = 0.0;
  for (long i = 0; i < mesh.total_nodes(); ++i)
    m1 += sys.lumped()[i] * s.f[i];
  CHECK(std::abs(m1 - m0) / m0 < 1e-12);
}

TEST_CASE("aligned reference element counts") {
  // degree-3 reference grids must contain every test node grid and at
  // least double the finest one
  CHECK(reference_elements_for({30, 60, 120}, 1) == 80);
  CHECK(reference_elements_for({15, 30, 60}, 2) == 80);
  CHECK(reference_elements_for({10, 20, 40}, 3) == 80);
  int e = reference_elements_for({7}, 1);
  CHECK(e % 7 == 0);
  CHECK(3 * e >= 14);
}
