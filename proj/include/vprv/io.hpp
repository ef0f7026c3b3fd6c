#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "vprv/config.hpp"
#include "vprv/mesh.hpp"
#include "vprv/reduction.hpp"
#include "vprv/simulation.hpp"

namespace vprv {

/// One sampled line of the time-series CSV.
struct SeriesRow {
  double t = 0.0, dt = 0.0;
  double mass = 0.0, momentum = 0.0;
  double kinetic_energy = 0.0, electric_energy = 0.0, total_energy = 0.0;
  double l2norm = 0.0, ee_log = 0.0;
  double max_eps_x = 0.0, max_eps_v = 0.0;
};

inline constexpr const char* series_header =
    "t,dt,mass,momentum,kinetic_energy,electric_energy,total_energy,l2norm,"
    "Ee_log,max_eps_x,max_eps_v";

class SeriesWriter {
 public:
  explicit SeriesWriter(const std::filesystem::path& path);
  void write(const SeriesRow& row);

 private:
  std::ofstream out_;
};

std::vector<SeriesRow> read_series(const std::filesystem::path& path);

struct SnapshotHeader {
  std::string field;
  double time = 0.0;
  int degree = 1;
  std::vector<AxisSpec> axes;
  std::vector<int> nodes_per_axis;
  std::string data_file;
};

/// Writes base_{index}.json (header) and base_{index}.bin (raw little-endian
/// float64 in node order).
void write_snapshot(const std::filesystem::path& dir, const std::string& base,
                    int index, const TensorMesh& mesh, double time,
                    std::span<const double> values);
std::vector<double> read_snapshot(const std::filesystem::path& json_path,
                                  SnapshotHeader& header);

/// Legacy-VTK structured-points writer for 2d nodal fields; periodic axes are
/// closed with their duplicate boundary line.
void write_vtk(const std::filesystem::path& path, const TensorMesh& mesh,
               const std::string& name, std::span<const double> values);

struct RunResult {
  long steps = 0;
  double wall_seconds = 0.0;
  double final_time = 0.0;
  Moments initial_moments, final_moments;
  std::vector<double> final_f;
  std::filesystem::path series_path;
  std::filesystem::path manifest_path;
};

/// Config-driven run: time loop with sampled series rows, snapshots at the
/// requested times (step sizes clip to land on them) and a manifest with the
/// effective settings.
RunResult run_simulation(const RunConfig& cfg);

}  // namespace vprv
