#include "capgrav/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "capgrav/errors.hpp"
#include "capgrav/version.hpp"

namespace capgrav {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

struct Row {
  double t, x, z, X, Z, u, v, p;
};

Row make_row(const ParticleState& s, const WaveParameters& wp) {
  const MovingFrameState m = to_moving_frame(s, wp);
  const FieldSample f = field_sample_extended(s.x, s.z, s.t, wp);
  return {s.t, s.x, s.z, m.X, m.Z, f.u, f.v, f.p};
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  out << "t,x,z,X,Z,u,v,p\n";
  for (const ParticleState& s : traj.samples()) {
    const Row r = make_row(s, traj.meta().wave);
    out << format_g17(r.t) << ',' << format_g17(r.x) << ',' << format_g17(r.z) << ','
        << format_g17(r.X) << ',' << format_g17(r.Z) << ',' << format_g17(r.u) << ','
        << format_g17(r.v) << ',' << format_g17(r.p) << '\n';
  }
}

void write_trajectory_json(const Trajectory& traj, std::ostream& out) {
  const WaveParameters& wp = traj.meta().wave;
  nlohmann::json j;
  j["format"] = "capgrav-trajectory";
  j["tool_version"] = kVersion;
  j["method"] = to_string(traj.meta().method);
  j["frame"] = traj.frame() == Frame::lab ? "lab" : "moving";
  j["x_closed_form"] = traj.meta().x_closed_form;
  j["z_closed_form"] = traj.meta().z_closed_form;
  j["warnings"] = traj.meta().warnings;
  j["parameters"] = {
      {"delta", wp.delta()}, {"weber", wp.weber()},   {"c0", wp.c0()},
      {"c", wp.c()},         {"epsilon", wp.epsilon()},
  };
  j["columns"] = {"t", "x", "z", "X", "Z", "u", "v", "p"};
  nlohmann::json samples = nlohmann::json::array();
  for (const ParticleState& s : traj.samples()) {
    const Row r = make_row(s, wp);
    samples.push_back({r.t, r.x, r.z, r.X, r.Z, r.u, r.v, r.p});
  }
  j["samples"] = std::move(samples);
  out << j.dump(2) << '\n';
}

Trajectory read_trajectory_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("trajectory json: parse failure: ") + e.what());
  }
  if (j.value("format", "") != "capgrav-trajectory") {
    throw ConfigError("trajectory json: unrecognized format tag");
  }
  const auto& p = j.at("parameters");
  const WaveParameters wp = WaveParameters::make(
      p.at("delta").get<double>(), p.at("weber").get<double>(),
      p.at("c0").get<double>(), p.value("epsilon", 0.0));

  TrajectoryMeta meta(wp);
  const std::string method = j.value("method", "numeric");
  if (method == "exact-case-I") meta.method = TrajectoryMethod::exact_case1;
  else if (method == "exact-case-II") meta.method = TrajectoryMethod::exact_case2;
  else meta.method = TrajectoryMethod::numeric;
  meta.x_closed_form = j.value("x_closed_form", false);
  meta.z_closed_form = j.value("z_closed_form", false);
  if (j.contains("warnings")) {
    meta.warnings = j.at("warnings").get<std::vector<std::string>>();
  }

  std::vector<ParticleState> samples;
  for (const auto& row : j.at("samples")) {
    samples.push_back({row.at(1).get<double>(), row.at(2).get<double>(),
                       row.at(0).get<double>()});
  }
  const Frame frame = j.value("frame", "lab") == std::string("moving") ? Frame::moving
                                                                       : Frame::lab;
  return Trajectory(frame, std::move(meta), std::move(samples));
}

void write_path_xy(const Trajectory& traj, std::ostream& out) {
  for (const ParticleState& s : traj.samples()) {
    out << format_g17(s.x) << ' ' << format_g17(s.z) << '\n';
  }
}

void write_trajectory(const Trajectory& traj, OutputFormat format, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  if (format == OutputFormat::csv) {
    write_trajectory_csv(traj, out);
  } else {
    write_trajectory_json(traj, out);
  }
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace capgrav
