#include "commands.hpp"
#include "run_config.hpp"

#include "dicke/errors.hpp"

#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace dicke;
using namespace dicke::cli;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  explicit TempDir(const std::string& tag)
      : path_(fs::temp_directory_path() /
              ("dicke_cli_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + DICKE_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::vector<std::string>> data_rows(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream cs(line);
    std::string cell;
    while (std::getline(cs, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("config parsing: defaults, grids and unknown keys") {
  const RunConfig defaults = parse_run_config_text("{}");
  CHECK(defaults.spectrum.omega_x.values.size() == 41);
  CHECK(defaults.demkov.x.values.front() == 0.5);

  const RunConfig c = parse_run_config_text(R"({
    "physics": {"n_atoms": 6, "omega": 10, "delta": 0.001},
    "ramp": {"gamma": 0.05},
    "protocol": {"engine": "demkov", "xi": 0.2},
    "gap": {"n_atoms": {"min": 1, "max": 4, "points": 4},
            "omega_x": {"min": 0.01, "max": 1, "points": 3, "scale": "log"}},
    "sweep": {"parameter": "gamma", "grid": [0.01, 0.02]}
  })");
  CHECK(c.physics.n_atoms == 6);
  CHECK(c.ramp.gamma == 0.05);
  CHECK(c.engine == Engine::demkov_analytic);
  CHECK(c.gap.n_atoms->values == std::vector<double>{1, 2, 3, 4});
  REQUIRE(c.gap.omega_x->values.size() == 3);
  CHECK(c.gap.omega_x->values[1] == doctest::Approx(0.1));
  CHECK(c.sweep->parameter == SweepParameter::gamma);
  const ProtocolConfig pc = c.protocol_config();
  CHECK(pc.xi == 0.2);
  CHECK(pc.params.delta == 0.001);

  // The resolved echo parses back to the same configuration.
  const RunConfig again = parse_run_config(to_json(c));
  CHECK(to_json(again) == to_json(c));

  CHECK_THROWS_AS(parse_run_config_text(R"({"physics": {"bogus": 1}})"), ValidationError);
  CHECK_THROWS_AS(parse_run_config_text(R"({"extra": {}})"), ValidationError);
  CHECK_THROWS_AS(parse_run_config_text(R"({"physics": {"omega": "six"}})"), ValidationError);
  CHECK_THROWS_AS(parse_run_config_text(R"({"gap": {"omega": {"min": 1}}})"), ValidationError);
  CHECK_THROWS_AS(parse_run_config_text(R"({"gap": {"omega": {"min": 0, "max": 1, "points": 3, "scale": "log"}}})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_run_config_text("{not json"), ValidationError);
}

TEST_CASE("spectrum output is deterministic and carries the config echo") {
  TempDir dir("spectrum");
  spit(dir.path() / "c.json",
       R"({"physics": {"n_atoms": 4, "omega": 4}, "spectrum": {"omega_x": {"min": 0, "max": 2, "points": 5}, "levels": 3}})");
  const std::string args = "spectrum --config \"" + (dir.path() / "c.json").string() +
                           "\" --out \"" + dir.path().string() + "\"";
  REQUIRE(run_cli(args) == kExitOk);
  const std::string first = slurp(dir.path() / "spectrum.csv");
  REQUIRE(run_cli(args + " --workers 2") == kExitOk);
  CHECK(slurp(dir.path() / "spectrum.csv") == first);
  CHECK(first.rfind("# dicke ", 0) == 0);
  CHECK(first.find("# config: {") != std::string::npos);
  const auto rows = data_rows(first);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0][0] == "omega_x");
  CHECK(rows[0].size() == 1 + 3 + 2 + 3);
  double previous = -1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double gap = std::stod(rows[i][4]);
    CHECK(gap >= previous);
    previous = gap;
  }
}

TEST_CASE("empty grid fails without leaving a file behind") {
  TempDir dir("empty");
  spit(dir.path() / "c.json", R"({"spectrum": {"omega_x": []}})");
  const int rc = run_cli("spectrum --config \"" + (dir.path() / "c.json").string() +
                         "\" --out \"" + dir.path().string() + "\"");
  CHECK(rc == kExitPhysics);
  CHECK_FALSE(fs::exists(dir.path() / "spectrum.csv"));
  for (const auto& entry : fs::directory_iterator(dir.path())) {
    CHECK(entry.path().filename() == "c.json");
  }
  RunConfig c = parse_run_config_text(R"({"spectrum": {"omega_x": []}})");
  std::ostringstream sink;
  CHECK_THROWS_WITH_AS(write_spectrum(sink, c, 1), "empty sweep", ValidationError);
}

TEST_CASE("gap table includes a finite single-atom row") {
  const RunConfig c = parse_run_config_text(
      R"({"gap": {"n_atoms": [1, 2, 4], "omega": [6], "omega_x": [0.03]}})");
  std::ostringstream out;
  write_gap(out, c, 1);
  const auto rows = data_rows(out.str());
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"n_atoms", "omega", "omega_x", "gap_numeric",
                                            "gap_perturbative", "gap_asymptotic", "rel_error"});
  CHECK(rows[1][0] == "1");
  for (std::size_t col = 3; col < rows[1].size(); ++col) {
    CHECK(std::isfinite(std::stod(rows[1][col])));
  }
  for (std::size_t r = 1; r < rows.size(); ++r) CHECK(std::stod(rows[r][6]) <= 0.10);
}

TEST_CASE("demkov comparison: summary line and the unbiased row") {
  const RunConfig c = parse_run_config_text("{}");
  std::ostringstream traj;
  std::ostringstream fin;
  const double max_diff = write_demkov(traj, fin, c, 1);
  CHECK(max_diff <= 1e-6);
  const std::string text = traj.str();
  const auto pos = text.find("# summary: max_abs_diff=");
  REQUIRE(pos != std::string::npos);
  std::istringstream summary(text.substr(pos + 24));
  double parsed = -1.0;
  std::string points;
  summary >> parsed >> points;
  CHECK(parsed == max_diff);
  CHECK(points.rfind("points=", 0) == 0);
  for (const auto& row : data_rows(fin.str())) {
    if (row[1] == "0") {
      CHECK(std::stod(row[2]) == doctest::Approx(0.5).epsilon(1e-10));
      CHECK(std::stod(row[3]) == doctest::Approx(0.5).epsilon(1e-10));
    }
  }
}

TEST_CASE("protocol table with the analytic engine") {
  RunConfig c = parse_run_config_text(
      R"({"physics": {"n_atoms": 4, "omega": 3},
          "sweep": {"parameter": "delta", "grid": [-0.005, 0, 0.005]}})");
  CommandOptions opts;
  opts.engine = Engine::demkov_analytic;
  std::ostringstream out;
  CHECK(write_protocol(out, c, opts, true));
  const auto rows = data_rows(out.str());
  REQUIRE(rows.size() == 4);
  CHECK(rows[0][0] == "delta");
  CHECK(rows[1][1].empty());  // no full simulation requested
  CHECK(std::stod(rows[1][2]) == doctest::Approx(-std::stod(rows[3][2])));
}

TEST_CASE("exit codes") {
  TempDir dir("codes");
  spit(dir.path() / "bad.json", R"({"physics": {"bogus": 1}})");
  spit(dir.path() / "ok.json", R"({"demkov": {"x": [1], "ratio": [0, 1], "samples": 5}})");
  const std::string out = " --out \"" + dir.path().string() + "\"";
  CHECK(run_cli("demkov --config \"" + (dir.path() / "bad.json").string() + "\"" + out) ==
        kExitPhysics);
  CHECK(run_cli("demkov --config \"" + (dir.path() / "missing.json").string() + "\"" + out) ==
        kExitIo);
  CHECK(run_cli("demkov --config \"" + (dir.path() / "ok.json").string() +
                "\" --out \"" + (dir.path() / "ok.json" / "sub").string() + "\"") == kExitIo);
  CHECK(run_cli("demkov --config \"" + (dir.path() / "ok.json").string() + "\"" + out) == kExitOk);
  CHECK(fs::exists(dir.path() / "demkov.csv"));
  CHECK(fs::exists(dir.path() / "demkov_final.csv"));
  CHECK(run_cli("nonsense") != kExitOk);
}
