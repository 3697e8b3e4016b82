// Exercises the installed command line surface: subcommands, flags, exit
// codes and file outputs, by invoking the real binary.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const std::string kCli = CAPGRAV_CLI_PATH;

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run(const std::string& args) {
  const std::string out_file =
      (fs::temp_directory_path() / ("capgrav_cli_out_" + std::to_string(::getpid()) + ".txt"))
          .string();
  const std::string cmd = kCli + " " + args + " > " + out_file + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out_file);
  std::stringstream buf;
  buf << in.rdbuf();
  fs::remove(out_file);
  int code = -1;
  if (WIFEXITED(status)) code = WEXITSTATUS(status);
  return {code, buf.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("capgrav_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::vector<std::vector<double>> parse_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    if (!row.empty()) rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("dispersion: single point matches tanh(pi)/pi") {
  const RunResult r = run("dispersion --delta 0.5 --weber 0");
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.output);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0][2] * rows[0][2] == doctest::Approx(0.31712325118991574).epsilon(1e-14));
}

TEST_CASE("dispersion: c is monotone in weber at fixed delta") {
  const RunResult r = run("dispersion --delta 0.5 --weber 0,0.25,0.5,1,2");
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.output);
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][2] > rows[i - 1][2]);
}

TEST_CASE("dispersion: empty grid exits 1") {
  CHECK(run("dispersion --delta '' --weber 0").exit_code == 1);
}

TEST_CASE("field: time series at a point") {
  const RunResult r = run("field --delta 0.5 --weber 0 --c0 0.3 --x0 0.1 --z0 0.5 "
                          "--t-end 0.5 --dt-out 0.1");
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.output);
  CHECK(rows.size() == 6);  // floor(0.5/0.1) + 1
}

TEST_CASE("trajectory: method both writes exact, numeric and diff files") {
  TempDir tmp;
  const std::string out = (tmp.path / "traj.csv").string();
  const RunResult r = run("trajectory --delta 0.5 --weber 0 --c0 0.36 --x0 0 --z0 0.15 "
                          "--t-end 1 --dt-out 0.01 --method both --out " + out);
  REQUIRE(r.exit_code == 0);
  const fs::path exact = tmp.path / "traj_exact.csv";
  const fs::path numeric = tmp.path / "traj_numeric.csv";
  const fs::path diff = tmp.path / "traj_diff.csv";
  REQUIRE(fs::exists(exact));
  REQUIRE(fs::exists(numeric));
  REQUIRE(fs::exists(diff));

  const auto rows = parse_csv(slurp(exact));
  CHECK(rows.size() == 101);  // floor(t_end/dt_out) + 1

  double max_diff = 0.0;
  for (const auto& row : parse_csv(slurp(diff))) {
    max_diff = std::max({max_diff, std::abs(row[1]), std::abs(row[2])});
  }
  CHECK(max_diff < 1e-6);
}

TEST_CASE("trajectory: equal-current mode, both methods agree") {
  TempDir tmp;
  const std::string out = (tmp.path / "eq.csv").string();
  const RunResult r = run("trajectory --delta 1.2 --weber 0 --c0 equal --x0 0.12 "
                          "--z0 0.2 --t-end 1 --dt-out 0.01 --method both --out " + out);
  REQUIRE(r.exit_code == 0);
  REQUIRE(fs::exists(tmp.path / "eq_exact.csv"));
  REQUIRE(fs::exists(tmp.path / "eq_numeric.csv"));
  double max_diff = 0.0;
  for (const auto& row : parse_csv(slurp(tmp.path / "eq_diff.csv"))) {
    max_diff = std::max({max_diff, std::abs(row[1]), std::abs(row[2])});
  }
  CHECK(max_diff < 1e-6);
}

TEST_CASE("trajectory: bed particle stays on the bed") {
  TempDir tmp;
  const std::string out = (tmp.path / "bed.csv").string();
  const RunResult r = run("trajectory --delta 0.5 --weber 0 --c0 0.3 --x0 0 --z0 0 "
                          "--t-end 0.5 --dt-out 0.1 --method numeric --out " + out);
  REQUIRE(r.exit_code == 0);
  for (const auto& row : parse_csv(slurp(tmp.path / "bed.csv"))) {
    CHECK(row[2] == 0.0);
  }
}

TEST_CASE("trajectory: exact method exits 2 when a regime is deferred") {
  TempDir tmp;
  const std::string out = (tmp.path / "x.csv").string();
  // c0 = c (Case I): the horizontal closed form is deferred for physical data.
  const RunResult r = run("trajectory --delta 0.5 --weber 0 --c0 equal --x0 0.1 "
                          "--z0 0.2 --t-end 1 --dt-out 0.1 --method exact --out " + out);
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("closed form") != std::string::npos);
}

TEST_CASE("trajectory: invalid input exits 1") {
  CHECK(run("trajectory --delta 0.5 --z0 2.0 --t-end 1 --dt-out 0.1").exit_code == 1);
  CHECK(run("trajectory --delta -1 --t-end 1 --dt-out 0.1").exit_code == 1);
  CHECK(run("trajectory --delta 0.5 --method sideways --t-end 1 --dt-out 0.1").exit_code == 1);
}

TEST_CASE("trajectory: numerical blow-up exits 3") {
  TempDir tmp;
  const std::string out = (tmp.path / "blow.csv").string();
  // c0 = c vertical dynamics blow up in finite time at this delta/z0.
  const RunResult r = run("trajectory --delta 0.5 --weber 0 --c0 equal --x0 0.1 "
                          "--z0 0.8 --t-end 50 --dt-out 0.5 --method numeric --out " + out);
  CHECK(r.exit_code == 3);
}

TEST_CASE("trajectory: identical configs give byte-identical output") {
  TempDir tmp;
  const std::string out1 = (tmp.path / "a.csv").string();
  const std::string out2 = (tmp.path / "b.csv").string();
  const std::string flags = "trajectory --delta 0.5 --weber 0.2 --c0 0.4 --x0 0.05 "
                            "--z0 0.3 --t-end 1 --dt-out 0.02 --method numeric --out ";
  REQUIRE(run(flags + out1).exit_code == 0);
  REQUIRE(run(flags + out2).exit_code == 0);
  CHECK(slurp(out1) == slurp(out2));
}

TEST_CASE("trajectory: json format embeds parameters and method") {
  TempDir tmp;
  const std::string out = (tmp.path / "t.json").string();
  const RunResult r = run("trajectory --delta 0.5 --weber 0 --c0 0.36 --x0 0 --z0 0.15 "
                          "--t-end 0.5 --dt-out 0.05 --method exact --format json --out " + out);
  REQUIRE(r.exit_code == 0);
  const std::string text = slurp(out);
  CHECK(text.find("\"method\": \"exact-case-II\"") != std::string::npos);
  CHECK(text.find("\"tool_version\"") != std::string::npos);
  CHECK(text.find("\"delta\"") != std::string::npos);
}

TEST_CASE("config file with command line override") {
  TempDir tmp;
  const fs::path cfg_path = tmp.path / "run.cfg";
  {
    std::ofstream cfg(cfg_path);
    cfg << "delta=0.5\nweber=0\nc0=0.36\nx0=0\nz0=0.4\nt_end=0.5\ndt_out=0.1\n"
        << "method=numeric\nformat=csv\nout=" << (tmp.path / "cfg.csv").string()
        << "\ntol=1e-10\n";
  }
  // override z0 on the command line: command line wins
  const RunResult r = run("trajectory --config " + cfg_path.string() + " --z0 0.2");
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(slurp(tmp.path / "cfg.csv"));
  REQUIRE_FALSE(rows.empty());
  CHECK(rows[0][2] == 0.2);
}

TEST_CASE("sweep: parallel runs with manifest") {
  TempDir tmp;
  const std::string out = (tmp.path / "sweep.csv").string();
  const RunResult r = run("sweep --delta 0.5 --weber 0 --c0 0.36 --x0 0 --z0 0.1,0.2,0.3 "
                          "--t-end 0.2 --dt-out 0.05 --method numeric --out " + out);
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(tmp.path / "sweep_000.csv"));
  CHECK(fs::exists(tmp.path / "sweep_001.csv"));
  CHECK(fs::exists(tmp.path / "sweep_002.csv"));
  REQUIRE(fs::exists(tmp.path / "sweep_manifest.json"));
  const std::string manifest = slurp(tmp.path / "sweep_manifest.json");
  CHECK(manifest.find("\"runs\"") != std::string::npos);
  CHECK(manifest.find("sweep_002.csv") != std::string::npos);
}

TEST_CASE("unknown flags and missing subcommand exit 1") {
  CHECK(run("--frobnicate").exit_code == 1);
  CHECK(run("trajectory --frobnicate").exit_code == 1);
}
