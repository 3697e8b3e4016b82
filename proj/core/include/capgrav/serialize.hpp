#pragma once

#include <iosfwd>
#include <string>

#include "capgrav/config.hpp"
#include "capgrav/dynamics.hpp"

namespace capgrav {

/// Render a double with 17 significant digits: enough to reproduce the
/// exact binary value on read-back.
std::string format_g17(double v);

/// CSV with the fixed header `t,x,z,X,Z,u,v,p`: lab position, moving-frame
/// position, and the field velocities/pressure along the path.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

/// Structured mirror of the CSV columns plus parameters, method tag,
/// warnings and tool version.
void write_trajectory_json(const Trajectory& traj, std::ostream& out);

/// Rebuild a trajectory (samples and metadata, no dense output) from the
/// structured format. Values round-trip losslessly.
Trajectory read_trajectory_json(std::istream& in);

/// Two-column `x z` path data for generic plotting tools.
void write_path_xy(const Trajectory& traj, std::ostream& out);

/// Write in the chosen format; throws IoError when the file cannot be
/// created or written.
void write_trajectory(const Trajectory& traj, OutputFormat format, const std::string& path);

}  // namespace capgrav
