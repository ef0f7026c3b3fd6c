#include "vprv/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "vprv/diagnostics.hpp"
#include "vprv/scenarios.hpp"

namespace fs = std::filesystem;

namespace vprv {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

}  // namespace

SeriesWriter::SeriesWriter(const fs::path& path) : out_(path) {
  if (!out_) throw std::runtime_error("cannot open " + path.string());
  out_ << series_header << "\n";
}

void SeriesWriter::write(const SeriesRow& r) {
  out_ << fmt(r.t) << "," << fmt(r.dt) << "," << fmt(r.mass) << ","
       << fmt(r.momentum) << "," << fmt(r.kinetic_energy) << ","
       << fmt(r.electric_energy) << "," << fmt(r.total_energy) << ","
       << fmt(r.l2norm) << "," << fmt(r.ee_log) << "," << fmt(r.max_eps_x)
       << "," << fmt(r.max_eps_v) << "\n";
  out_.flush();
}

std::vector<SeriesRow> read_series(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != series_header)
    throw std::runtime_error("series header mismatch in " + path.string());
  std::vector<SeriesRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    double v[11];
    for (int i = 0; i < 11; ++i) {
      if (!std::getline(ss, cell, ','))
        throw std::runtime_error("short series row in " + path.string());
      v[i] = std::stod(cell);
    }
    rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8],
                    v[9], v[10]});
  }
  return rows;
}

void write_snapshot(const fs::path& dir, const std::string& base, int index,
                    const TensorMesh& mesh, double time,
                    std::span<const double> values) {
  char suffix[16];
  std::snprintf(suffix, sizeof(suffix), "_%03d", index);
  std::string stem = base + suffix;
  fs::path bin_path = dir / (stem + ".bin");
  fs::path json_path = dir / (stem + ".json");

  {
    std::ofstream bin(bin_path, std::ios::binary);
    if (!bin) throw std::runtime_error("cannot open " + bin_path.string());
    bin.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(double)));
  }

  nlohmann::json j;
  j["field"] = base;
  j["time"] = time;
  j["degree"] = mesh.degree();
  j["order"] = "row-major, last axis fastest";
  j["format"] = "float64-le";
  j["data_file"] = stem + ".bin";
  j["values"] = values.size();
  nlohmann::json axes = nlohmann::json::array();
  for (int a = 0; a < mesh.dim(); ++a) {
    const Axis& ax = mesh.axis(a);
    axes.push_back({{"lo", ax.lo},
                    {"hi", ax.hi},
                    {"elements", ax.elements},
                    {"periodic", ax.periodic},
                    {"nodes", ax.nodes}});
  }
  j["axes"] = axes;
  std::ofstream out(json_path);
  if (!out) throw std::runtime_error("cannot open " + json_path.string());
  out << j.dump(2) << "\n";
}

std::vector<double> read_snapshot(const fs::path& json_path,
                                  SnapshotHeader& header) {
  std::ifstream in(json_path);
  if (!in) throw std::runtime_error("cannot open " + json_path.string());
  nlohmann::json j = nlohmann::json::parse(in);
  header.field = j.at("field");
  header.time = j.at("time");
  header.degree = j.at("degree");
  header.data_file = j.at("data_file");
  header.axes.clear();
  header.nodes_per_axis.clear();
  for (const auto& a : j.at("axes")) {
    header.axes.push_back(
        {a.at("lo"), a.at("hi"), a.at("elements"), a.at("periodic")});
    header.nodes_per_axis.push_back(a.at("nodes"));
  }
  size_t count = j.at("values");
  std::vector<double> values(count);
  fs::path bin_path = json_path.parent_path() / header.data_file;
  std::ifstream bin(bin_path, std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open " + bin_path.string());
  bin.read(reinterpret_cast<char*>(values.data()),
           static_cast<std::streamsize>(count * sizeof(double)));
  if (static_cast<size_t>(bin.gcount()) != count * sizeof(double))
    throw std::runtime_error("snapshot data truncated: " + bin_path.string());
  return values;
}

void write_vtk(const fs::path& path, const TensorMesh& mesh,
               const std::string& name, std::span<const double> values) {
  if (mesh.dim() != 2)
    throw std::invalid_argument("write_vtk: needs a 2d mesh");
  const Axis& ax = mesh.axis(0);
  const Axis& ay = mesh.axis(1);
  int nx = ax.nodes + (ax.periodic ? 1 : 0);
  int ny = ay.nodes + (ay.periodic ? 1 : 0);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "# vtk DataFile Version 3.0\n"
      << name << "\nASCII\nDATASET STRUCTURED_POINTS\n"
      << "DIMENSIONS " << nx << " " << ny << " 1\n"
      << "ORIGIN " << ax.lo << " " << ay.lo << " 0\n"
      << "SPACING " << ax.dnode << " " << ay.dnode << " 1\n"
      << "POINT_DATA " << nx * ny << "\n"
      << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      long node = static_cast<long>(i % ax.nodes) * ay.nodes + (j % ay.nodes);
      out << fmt(values[node]) << "\n";
    }
  }
}

namespace {

SeriesRow sample_row(VlasovSystem& sys, VlasovSystem::State& s,
                     const StepInfo* si, double floor_log) {
  sys.refresh_fields(s);
  Moments m = sys.moments(s.f);
  double fe = sys.field_energy(s.es);
  SeriesRow r;
  r.t = s.time;
  r.dt = si ? si->dt : 0.0;
  r.mass = m.mass;
  r.momentum = m.momentum;
  r.kinetic_energy = m.kinetic;
  r.electric_energy = 0.5 * fe;
  r.total_energy = m.kinetic + 0.5 * fe;
  r.l2norm = std::sqrt(std::max(0.0, m.l2sq));
  r.ee_log = field_energy_log(fe, floor_log);
  if (si) {
    r.max_eps_x = si->max_eps_x;
    r.max_eps_v = si->max_eps_v;
  }
  return r;
}

}  // namespace

RunResult run_simulation(const RunConfig& cfg) {
  auto clock_start = std::chrono::steady_clock::now();

  Preset preset = make_preset(cfg.preset);
  TensorMesh mesh = make_mesh(preset, cfg.elements_x, cfg.elements_v,
                              cfg.degree);
  VlasovSystem sys(preset.model, mesh, cfg.stabilization, cfg.solver);
  std::vector<double> f0 =
      initial_field(mesh, preset, cfg.resolved_alpha(), cfg.resolved_theta());
  VlasovSystem::State s = sys.make_state(f0);

  fs::create_directories(cfg.output_dir);
  fs::path dir = cfg.output_dir;
  RunResult res;
  res.series_path = dir / "series.csv";
  res.manifest_path = dir / "manifest.ini";

  SeriesWriter series(res.series_path);
  const double T = cfg.resolved_final_time();
  const double eps = 1e-9 * std::max(1.0, T);

  std::vector<double> snaps = cfg.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  size_t isnap = 0;

  auto emit_snapshot = [&](size_t idx) {
    write_snapshot(dir, "f", static_cast<int>(idx), mesh, s.time, s.f);
    if (cfg.snapshot_viscosity &&
        cfg.stabilization != StabilizationMode::none) {
      const ViscosityField& eps_f = sys.last_viscosity();
      for (int a = 0; a < mesh.dim(); ++a)
        write_snapshot(dir, "eps_" + std::to_string(a), static_cast<int>(idx),
                       mesh, s.time, eps_f.eps[a]);
    }
    if (cfg.write_vtk && mesh.dim() == 2) {
      char suffix[16];
      std::snprintf(suffix, sizeof(suffix), "_%03zu.vtk", idx);
      write_vtk(dir / ("f" + std::string(suffix)), mesh, "f", s.f);
    }
  };

  res.initial_moments = sys.moments(s.f);
  series.write(sample_row(sys, s, nullptr, cfg.ee_log_floor));
  double last_row_time = 0.0;
  while (isnap < snaps.size() && snaps[isnap] <= eps) {
    emit_snapshot(isnap);
    ++isnap;
  }

  double next_sample = cfg.series_interval;
  while (s.time < T - eps) {
    double limit = T - s.time;
    limit = std::min(limit, next_sample - s.time);
    if (isnap < snaps.size()) limit = std::min(limit, snaps[isnap] - s.time);
    StepInfo si = sys.step(s, limit);
    if (s.time >= next_sample - eps) {
      series.write(sample_row(sys, s, &si, cfg.ee_log_floor));
      last_row_time = s.time;
      while (next_sample <= s.time + eps) next_sample += cfg.series_interval;
    }
    if (isnap < snaps.size() && s.time >= snaps[isnap] - eps) {
      emit_snapshot(isnap);
      ++isnap;
    }
  }
  if (std::abs(last_row_time - s.time) > eps) {
    StepInfo si;
    si.dt = s.dt_now;
    series.write(sample_row(sys, s, &si, cfg.ee_log_floor));
  }

  res.steps = s.step;
  res.final_time = s.time;
  res.final_moments = sys.moments(s.f);
  res.final_f = s.f;
  res.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - clock_start)
                         .count();

  std::ofstream manifest(res.manifest_path);
  manifest << cfg.to_text();
  manifest << "\n[info]\n";
  manifest << "model = " << to_string(preset.model) << "\n";
  manifest << "phase_nodes = " << mesh.total_nodes() << "\n";
  manifest << "phase_elements = " << mesh.total_elements() << "\n";
  manifest << "steps = " << res.steps << "\n";
  manifest << "final_time = " << res.final_time << "\n";
  manifest << "wall_seconds = " << res.wall_seconds << "\n";
  return res;
}

}  // namespace vprv
