// Command line front end: dispersion tables, field samples, particle
// trajectories (exact / numeric / both), the verification suite, and
// parallel parameter sweeps.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "capgrav/case_equal.hpp"
#include "capgrav/case_general.hpp"
#include "capgrav/config.hpp"
#include "capgrav/dynamics.hpp"
#include "capgrav/errors.hpp"
#include "capgrav/serialize.hpp"
#include "capgrav/verify.hpp"
#include "capgrav/version.hpp"
#include "capgrav/wave.hpp"

namespace {

using namespace capgrav;

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 1;
constexpr int kExitRegimeUnsupported = 2;
constexpr int kExitNumericalOrIo = 3;

struct Overrides {
  std::optional<std::string> config_path;
  std::optional<std::string> delta, weber;  // lists allowed for dispersion/sweep
  std::optional<std::string> c0;            // "equal" or number (list in sweep)
  std::optional<std::string> x0, z0;
  std::optional<double> t_end, dt_out, tol;
  std::optional<std::string> method, format, out;
};

void add_common_options(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--config", ov.config_path, "flat key=value config file (flags win)");
  cmd->add_option("--delta", ov.delta, "shallowness parameter delta > 0");
  cmd->add_option("--weber", ov.weber, "Weber number >= 0");
  cmd->add_option("--c0", ov.c0, "uniform current: a number, or 'equal' for c0 = c");
  cmd->add_option("--x0", ov.x0, "initial horizontal position");
  cmd->add_option("--z0", ov.z0, "initial depth fraction in [0, 1]");
  cmd->add_option("--t-end", ov.t_end, "end of the output window");
  cmd->add_option("--dt-out", ov.dt_out, "output sampling interval");
  cmd->add_option("--method", ov.method, "exact | numeric | both");
  cmd->add_option("--format", ov.format, "csv | json");
  cmd->add_option("--out", ov.out, "output path");
  cmd->add_option("--tol", ov.tol, "relative integrator tolerance");
}

double parse_one_double(const std::string& what, const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw ConfigError("");
    return v;
  } catch (...) {
    throw ConfigError("invalid number for " + what + ": '" + s + "'");
  }
}

std::vector<double> parse_double_list(const std::string& what, const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(parse_one_double(what, item));
  }
  return out;
}

RunConfig build_config(const Overrides& ov) {
  RunConfig cfg;
  if (ov.config_path) cfg = RunConfig::load(*ov.config_path);
  if (ov.delta) cfg.delta = parse_one_double("--delta", *ov.delta);
  if (ov.weber) cfg.weber = parse_one_double("--weber", *ov.weber);
  if (ov.c0) {
    if (*ov.c0 == "equal") {
      cfg.c0_equal = true;
      cfg.c0_value = 0.0;
    } else {
      cfg.c0_equal = false;
      cfg.c0_value = parse_one_double("--c0", *ov.c0);
    }
  }
  if (ov.x0) cfg.x0 = parse_one_double("--x0", *ov.x0);
  if (ov.z0) cfg.z0 = parse_one_double("--z0", *ov.z0);
  if (ov.t_end) cfg.t_end = *ov.t_end;
  if (ov.dt_out) cfg.dt_out = *ov.dt_out;
  if (ov.method) cfg.method = method_from_string(*ov.method);
  if (ov.format) cfg.format = format_from_string(*ov.format);
  if (ov.out) cfg.out_path = *ov.out;
  if (ov.tol) cfg.rel_tol = *ov.tol;
  cfg.validate();
  return cfg;
}

std::vector<double> output_grid(const RunConfig& cfg) {
  const long n = static_cast<long>(std::floor(cfg.t_end / cfg.dt_out));
  std::vector<double> grid;
  grid.reserve(n + 1);
  for (long i = 0; i <= n; ++i) grid.push_back(i * cfg.dt_out);
  return grid;
}

std::string path_with_suffix(const std::string& path, const std::string& suffix) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of("/\\");
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + "_" + suffix;
  }
  return path.substr(0, dot) + "_" + suffix + path.substr(dot);
}

std::ostream& open_or_stdout(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  return file;
}

// ------------------------------------------------------------- dispersion

int run_dispersion(const Overrides& ov) {
  RunConfig cfg;
  if (ov.config_path) cfg = RunConfig::load(*ov.config_path);
  const std::vector<double> deltas =
      ov.delta ? parse_double_list("--delta", *ov.delta) : std::vector<double>{cfg.delta};
  const std::vector<double> webers =
      ov.weber ? parse_double_list("--weber", *ov.weber) : std::vector<double>{cfg.weber};
  if (deltas.empty() || webers.empty()) {
    throw ConfigError("dispersion: empty (delta, weber) grid");
  }
  std::ofstream file;
  std::ostream& out = open_or_stdout(file, ov.out ? *ov.out : "");
  out << "delta,weber,c\n";
  for (double d : deltas) {
    for (double w : webers) {
      out << format_g17(d) << ',' << format_g17(w) << ','
          << format_g17(dispersion_speed(d, w)) << '\n';
    }
  }
  out.flush();
  return kExitOk;
}

// ------------------------------------------------------------------ field

int run_field(const Overrides& ov) {
  const RunConfig cfg = build_config(ov);
  const WaveParameters wp = cfg.wave_parameters();
  std::ofstream file;
  std::ostream& out = open_or_stdout(file, ov.out ? *ov.out : "");
  out << "t,x,z,u,v,p,eta\n";
  for (double t : output_grid(cfg)) {
    const FieldSample f = field_sample(cfg.x0, cfg.z0, t, wp);
    out << format_g17(t) << ',' << format_g17(cfg.x0) << ',' << format_g17(cfg.z0) << ','
        << format_g17(f.u) << ',' << format_g17(f.v) << ',' << format_g17(f.p) << ','
        << format_g17(f.eta) << '\n';
  }
  out.flush();
  return kExitOk;
}

// ------------------------------------------------------------- trajectory

Trajectory exact_trajectory(const RunConfig& cfg, const WaveParameters& wp,
                            std::span<const double> grid) {
  IntegratorConfig icfg;
  icfg.rel_tol = cfg.rel_tol;
  icfg.abs_tol = std::min(cfg.rel_tol, 1e-10);
  return wp.equal_case() ? trajectory_case1(cfg.x0, cfg.z0, grid, wp, icfg)
                         : trajectory_case2(cfg.x0, cfg.z0, grid, wp, icfg);
}

Trajectory numeric_trajectory(const RunConfig& cfg, const WaveParameters& wp,
                              std::span<const double> grid) {
  IntegratorConfig icfg;
  icfg.rel_tol = cfg.rel_tol;
  icfg.abs_tol = std::min(cfg.rel_tol, 1e-10);
  if (grid.size() < 2) {
    TrajectoryMeta meta(wp);
    meta.method = TrajectoryMethod::numeric;
    return Trajectory(Frame::lab, std::move(meta), {{cfg.x0, cfg.z0, grid.front()}});
  }
  return integrate({cfg.x0, cfg.z0, 0.0}, grid.back(), wp, icfg, grid);
}

void report_warnings(const Trajectory& traj) {
  for (const std::string& w : traj.meta().warnings) {
    std::cerr << "warning: " << w << "\n";
  }
}

// Returns the list of files written.
std::vector<std::string> run_trajectory_files(const RunConfig& cfg) {
  const WaveParameters wp = cfg.wave_parameters();
  const std::vector<double> grid = output_grid(cfg);
  const std::string ext_path = cfg.out_path;
  std::vector<std::string> written;

  if (cfg.method == MethodChoice::exact) {
    const Trajectory traj = exact_trajectory(cfg, wp, grid);
    report_warnings(traj);
    const bool fully_exact =
        traj.meta().method != TrajectoryMethod::numeric &&
        traj.meta().x_closed_form && traj.meta().z_closed_form;
    if (!fully_exact) {
      throw RegimeUnsupportedError(
          "exact method requested, but a closed form is not available for these "
          "initial data (a component regime is deferred); rerun with "
          "--method numeric or --method both");
    }
    write_trajectory(traj, cfg.format, ext_path);
    written.push_back(ext_path);
    return written;
  }

  if (cfg.method == MethodChoice::numeric) {
    const Trajectory traj = numeric_trajectory(cfg, wp, grid);
    report_warnings(traj);
    write_trajectory(traj, cfg.format, ext_path);
    written.push_back(ext_path);
    return written;
  }

  // both: exact (with per-component fallbacks allowed) + numeric + diffs
  const Trajectory exact = exact_trajectory(cfg, wp, grid);
  const Trajectory numeric = numeric_trajectory(cfg, wp, grid);
  report_warnings(exact);
  const std::string exact_path = path_with_suffix(ext_path, "exact");
  const std::string numeric_path = path_with_suffix(ext_path, "numeric");
  write_trajectory(exact, cfg.format, exact_path);
  write_trajectory(numeric, cfg.format, numeric_path);
  written.push_back(exact_path);
  written.push_back(numeric_path);

  std::string diff_path = path_with_suffix(ext_path, "diff");
  if (cfg.format == OutputFormat::json) {
    const auto dot = diff_path.find_last_of('.');
    diff_path = diff_path.substr(0, dot) + ".csv";
  }
  std::ofstream diff(diff_path);
  if (!diff) throw IoError("cannot open '" + diff_path + "'");
  diff << "t,dx,dz\n";
  double max_diff = 0.0;
  const std::size_t n = std::min(exact.samples().size(), numeric.samples().size());
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = exact.samples()[i].x - numeric.samples()[i].x;
    const double dz = exact.samples()[i].z - numeric.samples()[i].z;
    max_diff = std::max({max_diff, std::abs(dx), std::abs(dz)});
    diff << format_g17(grid[i]) << ',' << format_g17(dx) << ',' << format_g17(dz) << '\n';
  }
  written.push_back(diff_path);
  std::cerr << "max |exact - numeric| over " << n << " samples: " << max_diff << "\n";
  return written;
}

int run_trajectory(const Overrides& ov) {
  run_trajectory_files(build_config(ov));
  return kExitOk;
}

// ----------------------------------------------------------------- verify

int run_verify(const Overrides& ov) {
  const VerificationReport report = run_verification({});
  std::cout << report.summary();
  const std::string path = ov.out ? *ov.out : "capgrav_verify.json";
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "'");
  out << report.to_json() << "\n";
  if (!out) throw IoError("write failed for '" + path + "'");
  std::cout << "report written to " << path << "\n";
  return report.all_pass() ? kExitOk : kExitNumericalOrIo;
}

// ------------------------------------------------------------------ sweep

int run_sweep(const Overrides& ov) {
  RunConfig base;
  if (ov.config_path) base = RunConfig::load(*ov.config_path);
  Overrides scalar = ov;  // the list-valued flags are expanded below
  scalar.delta.reset();
  scalar.weber.reset();
  scalar.c0.reset();
  scalar.x0.reset();
  scalar.z0.reset();

  const auto expand = [&](const std::optional<std::string>& field,
                          double fallback) -> std::vector<double> {
    if (!field) return {fallback};
    return parse_double_list("sweep list", *field);
  };
  const std::vector<double> deltas = expand(ov.delta, base.delta);
  const std::vector<double> webers = expand(ov.weber, base.weber);
  const std::vector<double> x0s = expand(ov.x0, base.x0);
  const std::vector<double> z0s = expand(ov.z0, base.z0);
  std::vector<std::pair<bool, double>> c0s;  // (equal, value)
  if (!ov.c0) {
    c0s.push_back({base.c0_equal, base.c0_value});
  } else {
    std::stringstream ss(*ov.c0);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      if (item == "equal") c0s.push_back({true, 0.0});
      else c0s.push_back({false, parse_one_double("--c0", item)});
    }
  }
  if (deltas.empty() || webers.empty() || x0s.empty() || z0s.empty() || c0s.empty()) {
    throw ConfigError("sweep: empty parameter list");
  }

  std::vector<RunConfig> runs;
  for (double d : deltas)
    for (double w : webers)
      for (const auto& c0 : c0s)
        for (double x0 : x0s)
          for (double z0 : z0s) {
            RunConfig cfg = build_config(scalar);
            cfg.delta = d;
            cfg.weber = w;
            cfg.c0_equal = c0.first;
            cfg.c0_value = c0.second;
            cfg.x0 = x0;
            cfg.z0 = z0;
            runs.push_back(cfg);
          }

  const std::string stem = runs.front().out_path;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    char tag[32];
    std::snprintf(tag, sizeof(tag), "%03zu", i);
    runs[i].out_path = path_with_suffix(stem, tag);
  }

  // Independent trajectories run in parallel; each writes its own files.
  std::vector<std::future<std::vector<std::string>>> futures;
  futures.reserve(runs.size());
  for (const RunConfig& cfg : runs) {
    futures.push_back(std::async(std::launch::async,
                                 [cfg]() { return run_trajectory_files(cfg); }));
  }
  nlohmann::json manifest;
  manifest["tool_version"] = kVersion;
  manifest["runs"] = nlohmann::json::array();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    nlohmann::json entry;
    entry["config"] = runs[i].serialize();
    entry["files"] = futures[i].get();
    manifest["runs"].push_back(std::move(entry));
  }
  const std::string manifest_path = path_with_suffix(stem, "manifest");
  const auto dot = manifest_path.find_last_of('.');
  const std::string manifest_json =
      (dot == std::string::npos ? manifest_path : manifest_path.substr(0, dot)) + ".json";
  std::ofstream out(manifest_json);
  if (!out) throw IoError("cannot open '" + manifest_json + "'");
  out << manifest.dump(2) << "\n";
  std::cout << "sweep complete: " << runs.size() << " runs, manifest " << manifest_json
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"particle trajectories beneath small-amplitude capillary-gravity waves"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Overrides ov_disp, ov_field, ov_traj, ov_verify, ov_sweep;
  CLI::App* disp = app.add_subcommand("dispersion", "tabulate the wave speed over a (delta, weber) grid");
  add_common_options(disp, ov_disp);
  CLI::App* field = app.add_subcommand("field", "sample the linear field at (x0, z0) over time");
  add_common_options(field, ov_field);
  CLI::App* traj = app.add_subcommand("trajectory", "compute a particle path (exact, numeric, or both)");
  add_common_options(traj, ov_traj);
  CLI::App* verify = app.add_subcommand("verify", "run the full verification suite");
  add_common_options(verify, ov_verify);
  CLI::App* sweep = app.add_subcommand("sweep", "run trajectories over parameter lists in parallel");
  add_common_options(sweep, ov_sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (disp->parsed()) return run_dispersion(ov_disp);
    if (field->parsed()) return run_field(ov_field);
    if (traj->parsed()) return run_trajectory(ov_traj);
    if (verify->parsed()) return run_verify(ov_verify);
    if (sweep->parsed()) return run_sweep(ov_sweep);
    return kExitInvalidInput;
  } catch (const RegimeUnsupportedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRegimeUnsupported;
  } catch (const WrongCaseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRegimeUnsupported;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumericalOrIo;
  }
}
