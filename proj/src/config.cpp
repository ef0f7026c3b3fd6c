#include "vprv/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vprv/scenarios.hpp"

namespace vprv {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    double x = std::stod(v, &used);
    if (trim(v.substr(used)).empty()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: bad number for " + key + ": '" + v + "'");
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    int x = std::stoi(v, &used);
    if (trim(v.substr(used)).empty()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: bad integer for " + key + ": '" + v + "'");
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config: bad boolean for " + key + ": '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(key, item));
  }
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  std::string section = "run";
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config: malformed section header at line " +
                          std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected key = value at line " +
                        std::to_string(lineno));
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config: empty key at line " + std::to_string(lineno));
    kv[section + "." + key] = value;
  }
  return kv;
}

RunConfig RunConfig::from_text(const std::string& text) {
  RunConfig c;
  c.apply(parse_key_values(text));
  return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

void RunConfig::apply(const KeyValues& kv) {
  for (const auto& [full, value] : kv) {
    if (full.rfind("info.", 0) == 0) continue;  // manifest annotations
    if (full == "run.preset") {
      preset = value;
    } else if (full == "run.degree") {
      degree = parse_int(full, value);
    } else if (full == "run.elements_x") {
      elements_x = parse_int(full, value);
    } else if (full == "run.elements_v") {
      elements_v = parse_int(full, value);
    } else if (full == "run.alpha") {
      alpha = parse_double(full, value);
    } else if (full == "run.theta") {
      theta = parse_double(full, value);
    } else if (full == "run.final_time") {
      final_time = parse_double(full, value);
    } else if (full == "run.stabilization") {
      try {
        stabilization = stabilization_from_string(value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    } else if (full == "solver.cfl") {
      solver.cfl = parse_double(full, value);
    } else if (full == "solver.mass_tol") {
      solver.mass_tol = parse_double(full, value);
    } else if (full == "solver.poisson_tol") {
      solver.poisson_tol = parse_double(full, value);
    } else if (full == "solver.residual_tol") {
      solver.residual_tol = parse_double(full, value);
    } else if (full == "solver.max_iterations") {
      solver.max_iterations = parse_int(full, value);
    } else if (full == "solver.lumped_mass") {
      solver.lumped_mass = parse_bool(full, value);
    } else if (full == "solver.workers") {
      solver.workers = parse_int(full, value);
    } else if (full == "solver.dt_max") {
      solver.dt_max = parse_double(full, value);
    } else if (full == "solver.bdf_ratio_tol") {
      solver.bdf_ratio_tol = parse_double(full, value);
    } else if (full == "solver.ee_log_floor") {
      ee_log_floor = parse_double(full, value);
    } else if (full == "output.directory") {
      output_dir = value;
    } else if (full == "output.series_interval") {
      series_interval = parse_double(full, value);
    } else if (full == "output.snapshot_times") {
      snapshot_times = parse_list(full, value);
    } else if (full == "output.snapshot_viscosity") {
      snapshot_viscosity = parse_bool(full, value);
    } else if (full == "output.write_vtk") {
      write_vtk = parse_bool(full, value);
    } else {
      throw ConfigError("config: unknown key " + full);
    }
  }
  validate();
}

void RunConfig::validate() const {
  make_preset(preset);  // throws on unknown names
  if (degree < 1 || degree > max_degree)
    throw ConfigError("config: degree must be 1.." + std::to_string(max_degree));
  if (elements_x < 1 || elements_v < 1)
    throw ConfigError("config: element counts must be positive");
  if (solver.cfl <= 0.0) throw ConfigError("config: cfl must be positive");
  if (series_interval <= 0.0)
    throw ConfigError("config: series_interval must be positive");
  if (resolved_final_time() <= 0.0)
    throw ConfigError("config: final_time must be positive");
}

std::string RunConfig::to_text() const {
  std::ostringstream out;
  out << "[run]\n";
  out << "preset = " << preset << "\n";
  out << "degree = " << degree << "\n";
  out << "elements_x = " << elements_x << "\n";
  out << "elements_v = " << elements_v << "\n";
  out << "alpha = " << format_double(resolved_alpha()) << "\n";
  out << "theta = " << format_double(resolved_theta()) << "\n";
  out << "final_time = " << format_double(resolved_final_time()) << "\n";
  out << "stabilization = " << to_string(stabilization) << "\n";
  out << "\n[solver]\n";
  out << "cfl = " << format_double(solver.cfl) << "\n";
  out << "mass_tol = " << format_double(solver.mass_tol) << "\n";
  out << "poisson_tol = " << format_double(solver.poisson_tol) << "\n";
  out << "residual_tol = " << format_double(solver.residual_tol) << "\n";
  out << "max_iterations = " << solver.max_iterations << "\n";
  out << "lumped_mass = " << (solver.lumped_mass ? "true" : "false") << "\n";
  out << "workers = " << solver.workers << "\n";
  out << "dt_max = " << format_double(solver.dt_max) << "\n";
  out << "bdf_ratio_tol = " << format_double(solver.bdf_ratio_tol) << "\n";
  out << "ee_log_floor = " << format_double(ee_log_floor) << "\n";
  out << "\n[output]\n";
  out << "directory = " << output_dir << "\n";
  out << "series_interval = " << format_double(series_interval) << "\n";
  if (!snapshot_times.empty()) {
    out << "snapshot_times = ";
    for (size_t i = 0; i < snapshot_times.size(); ++i) {
      if (i) out << ",";
      out << format_double(snapshot_times[i]);
    }
    out << "\n";
  }
  out << "snapshot_viscosity = " << (snapshot_viscosity ? "true" : "false")
      << "\n";
  out << "write_vtk = " << (write_vtk ? "true" : "false") << "\n";
  return out.str();
}

double RunConfig::resolved_alpha() const {
  return alpha ? *alpha : make_preset(preset).alpha;
}

double RunConfig::resolved_theta() const {
  return theta ? *theta : make_preset(preset).theta;
}

double RunConfig::resolved_final_time() const {
  return final_time ? *final_time : make_preset(preset).default_time;
}

}  // namespace vprv
