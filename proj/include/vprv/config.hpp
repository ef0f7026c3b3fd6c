#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vprv/simulation.hpp"
#include "vprv/stabilization.hpp"

namespace vprv {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat key = value settings grouped in [sections]; '#' and ';' start
/// comments.  Section [info] is reserved for manifest annotations and is
/// ignored on input.
using KeyValues = std::map<std::string, std::string>;  // "section.key" -> value

KeyValues parse_key_values(const std::string& text);

/// Everything needed to reproduce a run.
struct RunConfig {
  std::string preset = "landau";
  int degree = 1;
  int elements_x = 32;
  int elements_v = 32;
  std::optional<double> alpha;       // preset default when unset
  std::optional<double> theta;       // preset default when unset
  std::optional<double> final_time;  // preset default when unset
  StabilizationMode stabilization = StabilizationMode::rv;

  SolverParams solver;
  double ee_log_floor = -745.0;

  std::string output_dir = "out";
  double series_interval = 0.1;
  std::vector<double> snapshot_times;
  bool snapshot_viscosity = false;
  bool write_vtk = false;

  static RunConfig from_text(const std::string& text);
  static RunConfig from_file(const std::string& path);
  void apply(const KeyValues& kv);
  void validate() const;
  /// Effective settings in the input format; parsing the output reproduces
  /// the configuration (resolved preset defaults included).
  std::string to_text() const;

  double resolved_alpha() const;
  double resolved_theta() const;
  double resolved_final_time() const;
};

}  // namespace vprv
