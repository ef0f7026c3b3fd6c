#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "vprv/diagnostics.hpp"
#include "vprv/fem.hpp"
#include "vprv/mesh.hpp"

using namespace vprv;

TEST_CASE("norms of a constant offset") {
  AxisSpec specs[2] = {{0.0, 2.0, 6, true}, {-1.0, 1.0, 4, true}};
  TensorMesh mesh(specs, 2, 1);
  Assembler asmb(mesh);
  std::vector<double> f(mesh.total_nodes(), 1.7),
      ref(mesh.total_nodes(), 1.0);
  ErrorNorms n = error_norms(asmb, f, ref);
  const double V = 4.0;
  CHECK(n.l1 == doctest::Approx(0.7 * V).epsilon(1e-13));
  CHECK(n.l2 == doctest::Approx(0.7 * std::sqrt(V)).epsilon(1e-13));
  CHECK(n.linf == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("norms integrate the interpolated difference") {
  AxisSpec ax{0.0, 2.0 * M_PI, 64, true};
  TensorMesh mesh({&ax, 1}, 2, 1);
  Assembler asmb(mesh);
  std::vector<double> f(mesh.total_nodes()), ref(mesh.total_nodes(), 0.0);
  for (long i = 0; i < mesh.total_nodes(); ++i) {
    double x[max_axes];
    mesh.coords(i, x);
    f[i] = std::sin(x[0]);
  }
  ErrorNorms n = error_norms(asmb, f, ref);
  CHECK(n.l1 == doctest::Approx(4.0).epsilon(1e-5));
  CHECK(n.l2 == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-6));
  CHECK(n.linf == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("convergence rates are dyadic logs") {
  std::vector<double> errs{1.6e-2, 4.0e-3, 1.0e-3};
  std::vector<double> r = convergence_rates(errs);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("energy log applies the floor") {
  CHECK(field_energy_log(std::exp(-4.0), -745.0) ==
        doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(field_energy_log(0.0, -745.0) == -745.0);
  CHECK(field_energy_log(-1.0, -745.0) == -745.0);
  CHECK(field_energy_log(std::exp(-30.0), -10.0) == -10.0);  // clamped
}

TEST_CASE("damping fit recovers a synthetic rate") {
  // log amplitude -gamma t + log|cos(omega t)| sampled densely: the peaks
  // lie exactly on the decay line
  const double gamma = 0.153, omega = 1.4;
  std::vector<double> t, e;
  for (int i = 0; i <= 4000; ++i) {
    double ti = i * 0.005;
    double a = std::abs(std::cos(omega * ti));
    t.push_back(ti);
    e.push_back(-gamma * ti + std::log(std::max(a, 1e-12)));
  }
  DampingFit fit = fit_damping_rate(t, e, 5);
  CHECK(fit.maxima_used == 5);
  CHECK(fit.rate == doctest::Approx(gamma).epsilon(1e-3));
  for (int i = 1; i < 5; ++i)
    CHECK(fit.t_max[i] - fit.t_max[i - 1] ==
          doctest::Approx(M_PI / omega).epsilon(0.01));
}

TEST_CASE("damping fit rejects degenerate series") {
  std::vector<double> t{0.0, 1.0}, e{0.0, -1.0};
  CHECK_THROWS(fit_damping_rate(t, e, 5));
  std::vector<double> t3{0.0, 1.0, 2.0}, mono{0.0, -1.0, -2.0};
  CHECK_THROWS(fit_damping_rate(t3, mono, 5));  // no interior maximum
}

TEST_CASE("relative deviation falls back for tiny baselines") {
  CHECK(relative_deviation(1.2, 1.0, 5.0) ==
        doctest::Approx(0.2).epsilon(1e-13));
  CHECK(relative_deviation(1e-14, 0.0, 2.0) ==
        doctest::Approx(0.5e-14).epsilon(1e-10));
}
