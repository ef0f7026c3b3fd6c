#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "vprv/config.hpp"
#include "vprv/io.hpp"
#include "vprv/mesh.hpp"

using namespace vprv;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("vprv_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config text round trip") {
  RunConfig cfg;
  cfg.preset = "two_stream";
  cfg.degree = 3;
  cfg.elements_x = 24;
  cfg.elements_v = 48;
  cfg.alpha = 0.05;
  cfg.final_time = 12.5;
  cfg.stabilization = StabilizationMode::rv_isotropic;
  cfg.solver.cfl = 0.3;
  cfg.solver.lumped_mass = true;
  cfg.solver.workers = 2;
  cfg.series_interval = 0.25;
  cfg.snapshot_times = {1.0, 2.5};
  cfg.write_vtk = true;
  RunConfig back = RunConfig::from_text(cfg.to_text());
  CHECK(back.preset == cfg.preset);
  CHECK(back.degree == cfg.degree);
  CHECK(back.elements_x == cfg.elements_x);
  CHECK(back.elements_v == cfg.elements_v);
  REQUIRE(back.alpha.has_value());
  CHECK(*back.alpha == *cfg.alpha);
  // to_text() pins every resolved parameter so a rerun cannot drift if the
  // preset defaults ever change; theta comes back as the resolved value.
  REQUIRE(back.theta.has_value());
  CHECK(*back.theta == 0.5);
  REQUIRE(back.final_time.has_value());
  CHECK(*back.final_time == *cfg.final_time);
  CHECK(back.stabilization == cfg.stabilization);
  CHECK(back.solver.cfl == cfg.solver.cfl);
  CHECK(back.solver.lumped_mass);
  CHECK(back.solver.workers == 2);
  CHECK(back.series_interval == cfg.series_interval);
  CHECK(back.snapshot_times == cfg.snapshot_times);
  CHECK(back.write_vtk);
}

TEST_CASE("config applies dotted overrides and validates") {
  RunConfig cfg;
  KeyValues kv;
  kv["run.preset"] = "bump_on_tail";
  kv["run.degree"] = "2";
  kv["solver.cfl"] = "0.2";
  kv["output.series_interval"] = "0.5";
  cfg.apply(kv);
  CHECK(cfg.preset == "bump_on_tail");
  CHECK(cfg.degree == 2);
  CHECK(cfg.solver.cfl == 0.2);
  CHECK(cfg.series_interval == 0.5);
  CHECK_THROWS_AS(cfg.apply(KeyValues{{"run.bogus", "1"}}), ConfigError);
  cfg.degree = 7;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.degree = 2;
  cfg.solver.cfl = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("config rejects malformed text") {
  CHECK_THROWS_AS(RunConfig::from_text("run.preset landau"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_text("[run]\ndegree = x\n"), ConfigError);
}

TEST_CASE("series round trip preserves all columns") {
  fs::path dir = temp_dir("series");
  fs::path p = dir / "series.csv";
  std::vector<SeriesRow> rows(3);
  for (int i = 0; i < 3; ++i) {
    SeriesRow& r = rows[i];
    r.t = 0.1 * i;
    r.dt = 0.01 + 1e-3 * i;
    r.mass = 4.0 / 3.0 + i;
    r.momentum = -1e-15 * i;
    r.kinetic_energy = 0.5 + i;
    r.electric_energy = 1e-7 / (i + 1);
    r.total_energy = r.kinetic_energy + r.electric_energy;
    r.l2norm = 0.3;
    r.ee_log = -8.05 - i;
    r.max_eps_x = 1e-3;
    r.max_eps_v = 2e-3;
  }
  {
    SeriesWriter w(p);
    for (const SeriesRow& r : rows) w.write(r);
  }
  std::string first = slurp(p);
  CHECK(first.rfind(series_header, 0) == 0);
  std::vector<SeriesRow> back = read_series(p);
  REQUIRE(back.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(back[i].t == rows[i].t);
    CHECK(back[i].dt == rows[i].dt);
    CHECK(back[i].mass == rows[i].mass);
    CHECK(back[i].momentum == rows[i].momentum);
    CHECK(back[i].kinetic_energy == rows[i].kinetic_energy);
    CHECK(back[i].electric_energy == rows[i].electric_energy);
    CHECK(back[i].total_energy == rows[i].total_energy);
    CHECK(back[i].l2norm == rows[i].l2norm);
    CHECK(back[i].ee_log == rows[i].ee_log);
    CHECK(back[i].max_eps_x == rows[i].max_eps_x);
    CHECK(back[i].max_eps_v == rows[i].max_eps_v);
  }
  {
    SeriesWriter w(dir / "again.csv");
    for (const SeriesRow& r : rows) w.write(r);
  }
  CHECK(slurp(dir / "again.csv") == first);  // byte identical
}

TEST_CASE("snapshot round trip") {
  fs::path dir = temp_dir("snap");
  AxisSpec specs[2] = {{0.0, 2.0, 4, true}, {-1.0, 1.0, 3, true}};
  TensorMesh mesh(specs, 2, 1);
  std::vector<double> f(mesh.total_nodes());
  for (size_t i = 0; i < f.size(); ++i) f[i] = 0.25 * i - 3.0;
  write_snapshot(dir, "f", 7, mesh, 1.25, f);
  SnapshotHeader hdr;
  std::vector<double> back = read_snapshot(dir / "f_007.json", hdr);
  CHECK(hdr.time == 1.25);
  CHECK(hdr.degree == 2);
  REQUIRE(hdr.axes.size() == 2);
  CHECK(hdr.axes[0].elements == 4);
  CHECK(hdr.axes[1].lo == -1.0);
  CHECK(hdr.nodes_per_axis[0] == 8);
  REQUIRE(back.size() == f.size());
  for (size_t i = 0; i < f.size(); ++i) CHECK(back[i] == f[i]);
}

TEST_CASE("run produces series, manifest and snapshots deterministically") {
  fs::path dir = temp_dir("run_a");
  RunConfig cfg;
  cfg.preset = "landau";
  cfg.degree = 1;
  cfg.elements_x = 8;
  cfg.elements_v = 8;
  cfg.final_time = 0.2;
  cfg.series_interval = 0.1;
  cfg.snapshot_times = {0.0, 0.2};
  cfg.write_vtk = true;
  cfg.output_dir = dir.string();
  RunResult res = run_simulation(cfg);
  CHECK(res.final_time == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(res.steps > 0);

  std::vector<SeriesRow> rows = read_series(res.series_path);
  REQUIRE(rows.size() >= 3);
  CHECK(rows.front().t == 0.0);
  CHECK(rows.back().t == doctest::Approx(0.2).epsilon(1e-14));
  for (size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].t > rows[i - 1].t);
  CHECK(rows.front().mass ==
        doctest::Approx(res.initial_moments.mass).epsilon(1e-13));

  // manifest reparses and pins the effective settings
  RunConfig manifest = RunConfig::from_file(res.manifest_path);
  CHECK(manifest.preset == "landau");
  CHECK(manifest.elements_x == 8);

  CHECK(fs::exists(dir / "f_000.json"));
  CHECK(fs::exists(dir / "f_001.bin"));
  CHECK(fs::exists(dir / "f_001.vtk"));

  // a rerun into a fresh directory yields byte-identical series bytes
  fs::path dir2 = temp_dir("run_b");
  cfg.output_dir = dir2.string();
  run_simulation(cfg);
  CHECK(slurp(dir2 / "series.csv") == slurp(dir / "series.csv"));
  CHECK(slurp(dir2 / "f_001.bin") == slurp(dir / "f_001.bin"));

  // a different worker count may round differently at the last ulp but must
  // agree numerically (deterministic to 1e-15 in the operator entries)
  fs::path dir3 = temp_dir("run_c");
  cfg.output_dir = dir3.string();
  cfg.solver.workers = 3;
  run_simulation(cfg);
  std::istringstream sa(slurp(dir / "series.csv")), sb(slurp(dir3 / "series.csv"));
  std::string la, lb;
  std::getline(sa, la);
  std::getline(sb, lb);
  CHECK(la == lb);  // identical header
  while (std::getline(sa, la)) {
    REQUIRE(std::getline(sb, lb));
    std::istringstream ra(la), rb(lb);
    std::string ca, cb;
    while (std::getline(ra, ca, ',')) {
      REQUIRE(std::getline(rb, cb, ','));
      double va = std::stod(ca), vb = std::stod(cb);
      CHECK(std::abs(va - vb) <= 1e-12 * (1.0 + std::max(std::abs(va), std::abs(vb))));
    }
  }
  CHECK_FALSE(std::getline(sb, lb));  // same row count
}

TEST_CASE("vtk writer closes periodic axes") {
  fs::path dir = temp_dir("vtk");
  AxisSpec specs[2] = {{0.0, 1.0, 3, true}, {0.0, 1.0, 2, true}};
  TensorMesh mesh(specs, 1, 1);
  std::vector<double> f(mesh.total_nodes(), 1.0);
  write_vtk(dir / "f.vtk", mesh, "f", f);
  std::string text = slurp(dir / "f.vtk");
  CHECK(text.find("STRUCTURED_POINTS") != std::string::npos);
  CHECK(text.find("DIMENSIONS 4 3 1") != std::string::npos);
  // 4 x 3 points, one scalar per line after the header block
  CHECK(text.find("POINT_DATA 12") != std::string::npos);
}
