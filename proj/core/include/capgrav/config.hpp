#pragma once

#include <string>

#include "capgrav/constants.hpp"
#include "capgrav/wave.hpp"

namespace capgrav {

enum class MethodChoice { exact, numeric, both };
enum class OutputFormat { csv, json };

const char* to_string(MethodChoice m);
const char* to_string(OutputFormat f);
MethodChoice method_from_string(const std::string& s);    // throws ConfigError
OutputFormat format_from_string(const std::string& s);    // throws ConfigError

/// One run of the trajectory/field machinery: wave parameters, initial
/// conditions, output window and serialization choices. Serializes to a
/// flat key=value text file; parse(serialize(c)) == c.
struct RunConfig {
  double delta = 0.5;
  double weber = 0.0;
  bool c0_equal = true;     // c0 mode "equal": c0 is the dispersion speed
  double c0_value = 0.0;    // explicit c0 when c0_equal is false
  double x0 = 0.0;
  double z0 = 0.5;
  double t_end = 1.0;
  double dt_out = 0.01;
  MethodChoice method = MethodChoice::both;
  OutputFormat format = OutputFormat::csv;
  std::string out_path = "trajectory.csv";
  double rel_tol = Tolerances::default_rel_tol;

  bool operator==(const RunConfig&) const = default;

  void validate() const;  // throws ConfigError on violated invariants

  /// The wave parameters this configuration selects (computes c; applies
  /// the "equal" current mode exactly).
  WaveParameters wave_parameters() const;

  std::string serialize() const;
  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::string& path);
  void save(const std::string& path) const;
};

}  // namespace capgrav
