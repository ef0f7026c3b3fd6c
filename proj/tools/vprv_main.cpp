#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "vprv/config.hpp"
#include "vprv/diagnostics.hpp"
#include "vprv/io.hpp"
#include "vprv/linsolve.hpp"
#include "vprv/scenarios.hpp"
#include "vprv/simulation.hpp"

namespace {

using namespace vprv;

constexpr int exit_config = 2;
constexpr int exit_solver = 3;
constexpr int exit_nan = 4;

/// Collects `--key value` overrides as config entries so that RunConfig
/// does all conversion and validation in one place.
struct Overrides {
  KeyValues kv;
  std::vector<std::string> sets;

  void add(CLI::App* app, const std::string& flag, const std::string& key,
           const std::string& help, bool is_flag = false) {
    std::string env = "VPRV_";
    for (char c : key)
      env += (c == '.') ? '_' : static_cast<char>(std::toupper(c));
    auto cb = [this, key](const std::string& v) { kv[key] = v; };
    if (is_flag) {
      app->add_flag_function(
             flag,
             [this, key](std::int64_t n) { kv[key] = n > 0 ? "true" : "false"; },
             help)
          ->envname(env);
    } else {
      app->add_option_function<std::string>(flag, cb, help)->envname(env);
    }
  }
};

void add_common(CLI::App* app, Overrides& ov, std::string& config_file) {
  app->add_option("config", config_file,
                  "configuration file (flat key = value with [sections])")
      ->check(CLI::ExistingFile);
  ov.add(app, "--preset", "run.preset",
         "initial-data preset (see `vprv presets`)");
  ov.add(app, "--degree", "run.degree", "element degree k in {1,2,3}");
  ov.add(app, "--elements-x", "run.elements_x", "elements along x");
  ov.add(app, "--elements-v", "run.elements_v",
         "elements along v (second spatial axis for the 2d model)");
  ov.add(app, "--alpha", "run.alpha", "perturbation amplitude override");
  ov.add(app, "--theta", "run.theta", "perturbation wavenumber override");
  ov.add(app, "--final-time", "run.final_time", "simulation end time T");
  ov.add(app, "--stabilization", "run.stabilization",
         "none | low_order | rv | rv_isotropic");
  ov.add(app, "--cfl", "solver.cfl", "CFL number (default 0.4)");
  ov.add(app, "--mass-tol", "solver.mass_tol", "mass-solve CG tolerance");
  ov.add(app, "--poisson-tol", "solver.poisson_tol", "Poisson CG tolerance");
  ov.add(app, "--residual-tol", "solver.residual_tol",
         "residual-projection CG tolerance");
  ov.add(app, "--max-iterations", "solver.max_iterations",
         "CG iteration cap");
  ov.add(app, "--lumped-mass", "solver.lumped_mass",
         "replace mass solves by the lumped diagonal", true);
  ov.add(app, "--workers", "solver.workers", "assembly worker threads");
  ov.add(app, "--dt-max", "solver.dt_max", "hard step-size cap (0 = none)");
  ov.add(app, "--bdf-ratio-tol", "solver.bdf_ratio_tol",
         "relative dt jump above which the residual falls back to BDF1");
  ov.add(app, "--ee-log-floor", "solver.ee_log_floor",
         "floor for the electric-energy log diagnostic");
  ov.add(app, "--output", "output.directory", "output directory");
  ov.add(app, "--series-interval", "output.series_interval",
         "time-series sampling interval");
  ov.add(app, "--snapshot-times", "output.snapshot_times",
         "comma-separated snapshot times");
  ov.add(app, "--snapshot-viscosity", "output.snapshot_viscosity",
         "also snapshot the viscosity fields", true);
  ov.add(app, "--write-vtk", "output.write_vtk",
         "emit legacy VTK files next to snapshots", true);
  app->add_option("--set", ov.sets, "extra section.key=value overrides");
}

RunConfig load_config(const std::string& config_file, const Overrides& ov) {
  RunConfig cfg;
  if (!config_file.empty()) cfg = RunConfig::from_file(config_file);
  KeyValues kv = ov.kv;
  for (const std::string& kvp : ov.sets) {
    auto eq = kvp.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--set expects section.key=value, got: " + kvp);
    kv[kvp.substr(0, eq)] = kvp.substr(eq + 1);
  }
  cfg.apply(kv);
  cfg.validate();
  return cfg;
}

int cmd_run(const std::string& config_file, const Overrides& ov) {
  RunConfig cfg = load_config(config_file, ov);
  RunResult res = run_simulation(cfg);
  double mass_dev = relative_deviation(res.final_moments.mass,
                                       res.initial_moments.mass, 1.0);
  std::printf("preset        %s (degree %d, %dx%d elements, %s)\n",
              cfg.preset.c_str(), cfg.degree, cfg.elements_x, cfg.elements_v,
              to_string(cfg.stabilization).c_str());
  std::printf("steps         %ld\n", res.steps);
  std::printf("final time    %.6f\n", res.final_time);
  std::printf("mass dev      %.3e\n", mass_dev);
  std::printf("wall seconds  %.2f\n", res.wall_seconds);
  std::printf("series        %s\n", res.series_path.c_str());
  std::printf("manifest      %s\n", res.manifest_path.c_str());
  return 0;
}

int cmd_convergence(const std::string& config_file, const Overrides& ov,
                    const std::string& grids_arg, const std::string& protocol,
                    int ref_elements) {
  RunConfig cfg = load_config(config_file, ov);
  if (!cfg.final_time) cfg.final_time = 5.0;

  std::vector<int> grids;
  {
    std::stringstream ss(grids_arg);
    std::string cell;
    while (std::getline(ss, cell, ','))
      if (!cell.empty()) grids.push_back(std::stoi(cell));
  }
  if (grids.size() < 2)
    throw ConfigError("convergence needs at least two grids (--grids)");

  Preset preset = make_preset(cfg.preset);
  preset.alpha = cfg.resolved_alpha();
  preset.theta = cfg.resolved_theta();
  double T = cfg.resolved_final_time();

  std::vector<ErrorNorms> errors;
  std::vector<long> nodes;
  if (protocol == "reference") {
    if (ref_elements <= 0) {
      ref_elements = reference_elements_for(grids, cfg.degree);
      if (ref_elements <= 0)
        throw ConfigError(
            "no aligned reference grid for these element counts; pass "
            "--reference-elements");
    }
    std::fprintf(stderr, "reference: degree 3, %dx%d elements...\n",
                 ref_elements, ref_elements);
    ReferenceSolution ref =
        make_reference(preset, ref_elements, ref_elements, 3,
                       StabilizationMode::none, cfg.solver, T);
    std::fprintf(stderr, "reference done (%ld steps)\n", ref.steps);
    for (int e : grids) {
      StudyRow row = backward_leg(preset, e, cfg.degree, cfg.stabilization,
                                  cfg.solver, T, ref);
      errors.push_back(row.errors);
      nodes.push_back(row.nodes);
      std::fprintf(stderr, "grid %d: L2 %.6e (%ld steps)\n", e, row.errors.l2,
                   row.steps);
    }
  } else if (protocol == "forward") {
    if (ref_elements <= 0) {
      ref_elements = reference_elements_for(grids, cfg.degree);
      if (ref_elements <= 0)
        throw ConfigError(
            "no aligned reference grid for these element counts; pass "
            "--reference-elements");
    }
    std::fprintf(stderr, "reference: degree 3, %dx%d elements...\n",
                 ref_elements, ref_elements);
    ReferenceSolution ref =
        make_reference(preset, ref_elements, ref_elements, 3,
                       StabilizationMode::none, cfg.solver, T);
    std::fprintf(stderr, "reference done (%ld steps)\n", ref.steps);
    for (int e : grids) {
      TensorMesh mesh = make_mesh(preset, e, e, cfg.degree);
      VlasovSystem sys(preset.model, mesh, cfg.stabilization, cfg.solver);
      std::vector<double> f0 =
          initial_field(mesh, preset, preset.alpha, preset.theta);
      VlasovSystem::State s = sys.make_state(f0);
      advance_to(sys, s, T);
      std::vector<double> target = apply_permutation(
          mesh.reflection_map(1), sample_reference(ref, mesh));
      ErrorNorms err = error_norms(sys.assembler(), s.f, target);
      errors.push_back(err);
      nodes.push_back(mesh.axis(0).nodes);
      std::fprintf(stderr, "grid %d: L2 %.6e (%ld steps)\n", e, err.l2,
                   s.step);
    }
  } else if (protocol == "retrace") {
    for (int e : grids) {
      TensorMesh mesh = make_mesh(preset, e, e, cfg.degree);
      VlasovSystem sys(preset.model, mesh, cfg.stabilization, cfg.solver);
      std::vector<double> f0 =
          initial_field(mesh, preset, preset.alpha, preset.theta);
      FBResult fb = forward_backward(sys, f0, T);
      errors.push_back(fb.errors);
      nodes.push_back(mesh.axis(0).nodes);
      std::fprintf(stderr, "grid %d: L2 %.6e (%ld steps)\n", e, fb.errors.l2,
                   fb.steps);
    }
  } else {
    throw ConfigError("unknown protocol: " + protocol);
  }

  auto rate = [&](double coarse, double fine, size_t i) {
    double r = std::log(coarse / fine) /
               std::log(static_cast<double>(grids[i]) / grids[i - 1]);
    return r;
  };

  std::filesystem::create_directories(cfg.output_dir);
  std::filesystem::path table_path =
      std::filesystem::path(cfg.output_dir) / "convergence.csv";
  std::ofstream table(table_path);
  std::string header =
      "elements,nodes_per_axis,L1,L1_rate,L2,L2_rate,Linf,Linf_rate";
  table << header << "\n";
  std::printf("%s\n", header.c_str());
  for (size_t i = 0; i < grids.size(); ++i) {
    char line[256];
    if (i == 0) {
      std::snprintf(line, sizeof(line), "%d,%ld,%.6e,,%.6e,,%.6e,", grids[i],
                    nodes[i], errors[i].l1, errors[i].l2, errors[i].linf);
    } else {
      std::snprintf(line, sizeof(line),
                    "%d,%ld,%.6e,%.2f,%.6e,%.2f,%.6e,%.2f", grids[i], nodes[i],
                    errors[i].l1, rate(errors[i - 1].l1, errors[i].l1, i),
                    errors[i].l2, rate(errors[i - 1].l2, errors[i].l2, i),
                    errors[i].linf,
                    rate(errors[i - 1].linf, errors[i].linf, i));
    }
    table << line << "\n";
    std::printf("%s\n", line);
  }
  std::fprintf(stderr, "table written to %s\n", table_path.c_str());
  return 0;
}

int cmd_presets() {
  for (const std::string& name : preset_names()) {
    Preset p = make_preset(name);
    std::printf("%-24s %-16s x:[%g,%g] v:[%g,%g] alpha=%g theta=%g T=%g\n",
                p.name.c_str(), to_string(p.model).c_str(), p.x_axis.lo,
                p.x_axis.hi, p.v_axis.lo, p.v_axis.hi, p.alpha, p.theta,
                p.default_time);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vlasov-Poisson / guiding-center solver with residual-based "
               "artificial viscosity"};
  app.require_subcommand(1);
  app.footer("Every option can also be set through the environment with the "
             "VPRV_ prefix, e.g. VPRV_SOLVER_WORKERS=4.");

  std::string run_config, conv_config, grids = "";
  std::string protocol = "reference";
  int ref_elements = 0;
  Overrides run_ov, conv_ov;

  CLI::App* run = app.add_subcommand("run", "execute one configured run");
  add_common(run, run_ov, run_config);

  CLI::App* conv = app.add_subcommand(
      "convergence",
      "backward-leg convergence study over a grid list (default T=5)");
  add_common(conv, conv_ov, conv_config);
  conv->add_option("--grids", grids,
                   "comma-separated element counts per axis, coarse to fine")
      ->required();
  conv->add_option(
      "--protocol", protocol,
      "reference: backward legs start from an interpolated fine-grid "
      "forward solve; retrace: each grid runs forward and backward itself "
      "(measures reversibility, cancels spatial error for the unstabilized "
      "scheme)");
  conv->add_option("--reference-elements", ref_elements,
                   "degree-3 reference grid size (0 = pick automatically)");

  CLI::App* presets =
      app.add_subcommand("presets", "list the built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }

  try {
    if (run->parsed()) return cmd_run(run_config, run_ov);
    if (conv->parsed())
      return cmd_convergence(conv_config, conv_ov, grids, protocol,
                             ref_elements);
    if (presets->parsed()) return cmd_presets();
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return exit_config;
  } catch (const NanAbort& e) {
    std::fprintf(stderr, "aborted: %s\n", e.what());
    return exit_nan;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return exit_solver;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
