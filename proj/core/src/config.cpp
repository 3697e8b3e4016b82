#include "capgrav/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "capgrav/errors.hpp"
#include "capgrav/serialize.hpp"

namespace capgrav {

const char* to_string(MethodChoice m) {
  switch (m) {
    case MethodChoice::exact: return "exact";
    case MethodChoice::numeric: return "numeric";
    case MethodChoice::both: return "both";
  }
  return "both";
}

const char* to_string(OutputFormat f) {
  return f == OutputFormat::csv ? "csv" : "json";
}

MethodChoice method_from_string(const std::string& s) {
  if (s == "exact") return MethodChoice::exact;
  if (s == "numeric") return MethodChoice::numeric;
  if (s == "both") return MethodChoice::both;
  throw ConfigError("unknown method '" + s + "' (expected exact|numeric|both)");
}

OutputFormat format_from_string(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw ConfigError("unknown format '" + s + "' (expected csv|json)");
}

void RunConfig::validate() const {
  if (!(delta > 0.0)) throw ConfigError("config: delta must be > 0");
  if (!(weber >= 0.0)) throw ConfigError("config: weber must be >= 0");
  if (!(z0 >= 0.0 && z0 <= 1.0)) throw ConfigError("config: z0 must lie in [0, 1]");
  if (!(t_end > 0.0)) throw ConfigError("config: t_end must be > 0");
  if (!(dt_out > 0.0)) throw ConfigError("config: dt_out must be > 0");
  if (!(rel_tol > 0.0)) throw ConfigError("config: tol must be > 0");
}

WaveParameters RunConfig::wave_parameters() const {
  validate();
  return c0_equal ? WaveParameters::make_equal_current(delta, weber)
                  : WaveParameters::make(delta, weber, c0_value);
}

std::string RunConfig::serialize() const {
  std::ostringstream out;
  out << "delta=" << format_g17(delta) << "\n";
  out << "weber=" << format_g17(weber) << "\n";
  out << "c0=" << (c0_equal ? std::string("equal") : format_g17(c0_value)) << "\n";
  out << "x0=" << format_g17(x0) << "\n";
  out << "z0=" << format_g17(z0) << "\n";
  out << "t_end=" << format_g17(t_end) << "\n";
  out << "dt_out=" << format_g17(dt_out) << "\n";
  out << "method=" << to_string(method) << "\n";
  out << "format=" << to_string(format) << "\n";
  out << "out=" << out_path << "\n";
  out << "tol=" << format_g17(rel_tol) << "\n";
  return out.str();
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw ConfigError("");
    return v;
  } catch (...) {
    throw ConfigError("config: invalid numeric value for '" + key + "': " + value);
  }
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: malformed line (expected key=value): " + line);
    }
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "delta") cfg.delta = parse_double(key, value);
    else if (key == "weber") cfg.weber = parse_double(key, value);
    else if (key == "c0") {
      if (value == "equal") {
        cfg.c0_equal = true;
        cfg.c0_value = 0.0;
      } else {
        cfg.c0_equal = false;
        cfg.c0_value = parse_double(key, value);
      }
    }
    else if (key == "x0") cfg.x0 = parse_double(key, value);
    else if (key == "z0") cfg.z0 = parse_double(key, value);
    else if (key == "t_end") cfg.t_end = parse_double(key, value);
    else if (key == "dt_out") cfg.dt_out = parse_double(key, value);
    else if (key == "method") cfg.method = method_from_string(value);
    else if (key == "format") cfg.format = format_from_string(value);
    else if (key == "out") cfg.out_path = value;
    else if (key == "tol") cfg.rel_tol = parse_double(key, value);
    else throw ConfigError("config: unknown key '" + key + "'");
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void RunConfig::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("config: cannot write '" + path + "'");
  out << serialize();
  if (!out) throw IoError("config: write failed for '" + path + "'");
}

}  // namespace capgrav
