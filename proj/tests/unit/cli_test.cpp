#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "zpf/error.hpp"

using namespace zpf;
using namespace zpf::cli;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result zpfsim(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("zpfsim_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

fs::path write_config(const std::string& name, const std::string& text) {
  const auto dir = scratch(name + "_cfg");
  fs::create_directories(dir);
  const auto path = dir / "config.json";
  std::ofstream(path) << text;
  return path;
}

std::vector<std::vector<double>> read_rows(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(cell.empty() ? NAN : std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("seed is mandatory for stochastic commands") {
  const auto dir = scratch("noseed");
  for (const char* cmd : {"sample-mode", "total-field", "oscillator"}) {
    const auto r = zpfsim({cmd, "--out", dir.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("seed") != std::string::npos);
  }
  const auto cfg = write_config("noseed", R"({"samples": 10})");
  const auto r = zpfsim({"sample-mode", "--config", cfg.string(), "--out", dir.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("seed") != std::string::npos);
}

TEST_CASE("usage errors exit with code 1") {
  CHECK(zpfsim({}).code == 1);
  CHECK(zpfsim({"sample-mode", "--seed", "1", "--kind", "gauss"}).code == 1);
  CHECK(zpfsim({"sample-mode", "--seed", "-4"}).code == 1);
  CHECK(zpfsim({"sample-mode", "--seed", "1", "--samples", "0"}).code == 1);
  CHECK(zpfsim({"no-such-command"}).code == 1);
  CHECK(zpfsim({"figure1", "--help"}).code == 0);
}

TEST_CASE("sample-mode records the KS outcomes") {
  const auto dir = scratch("sample_mode");
  auto r = zpfsim({"sample-mode", "--seed", "11", "--samples", "100000", "--kind", "modified", "--out",
                   (dir / "mod").string(), "--json"});
  REQUIRE(r.code == 0);
  auto s = json::parse(r.out);
  CHECK(s == read_json(dir / "mod" / "summary.json"));
  CHECK(s["ks_gaussian"]["pass"] == true);
  CHECK(s["moments"]["count"] == 100000);

  r = zpfsim({"sample-mode", "--seed", "11", "--samples", "100000", "--kind", "boyer", "--out",
              (dir / "boy").string(), "--json", "--mode", "5"});
  REQUIRE(r.code == 0);
  s = json::parse(r.out);
  CHECK(s["ks_arcsine"]["pass"] == true);
  CHECK(s["ks_gaussian"]["pass"] == false);
  CHECK(s["ks_gaussian"]["statistic"].get<double>() >= 0.05);
  CHECK(s["mode"]["index"] == 5);

  const auto csv = slurp(dir / "boy" / "samples.csv");
  CHECK(csv.find("# seed: 11\n") != std::string::npos);
  CHECK(csv.find("# mode_index: 5\n") != std::string::npos);

  CHECK(zpfsim({"sample-mode", "--seed", "1", "--mode", "100000", "--out", dir.string()}).code == 1);
}

TEST_CASE("total-field: boyer fails on a two-mode grid, passes on the default lattice") {
  const auto dir = scratch("total_field");
  const auto sparse = write_config("total_field", R"({
  "seed": 5,
  "samples": 10000,
  "grid": {"wavevectors": [[0, 0, 2]], "volume": 1}
})");
  for (const char* kind : {"boyer", "modified"}) {
    const auto r = zpfsim({"total-field", "--config", sparse.string(), "--kind", kind, "--out",
                           (dir / "sparse").string(), "--json"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["ks_gaussian"]["pass"] == (std::string(kind) == "modified"));
  }
  const auto r = zpfsim({"total-field", "--seed", "5", "--kind", "boyer", "--out", (dir / "dense").string(), "--json"});
  REQUIRE(r.code == 0);
  const auto s = json::parse(r.out);
  CHECK(s["ks_gaussian"]["pass"] == true);
  CHECK(s["grid"]["modes"].get<int>() >= 100);
  CHECK(fs::exists(dir / "dense" / "histogram.csv"));
  const auto rows = read_rows(dir / "dense" / "histogram.csv");
  CHECK(rows.size() == 40);
}

TEST_CASE("oscillator summary") {
  const auto dir = scratch("oscillator");
  const auto r = zpfsim({"oscillator", "--seed", "3", "--samples", "20000", "--out", dir.string(), "--json"});
  REQUIRE(r.code == 0);
  CHECK(r.err.empty());
  const auto s = json::parse(r.out);
  for (const auto& axis : s["axes"]) CHECK(axis["ks_gaussian"]["pass"] == true);
  const double predicted = s["predicted_variance"].get<double>();
  CHECK(predicted == doctest::Approx(0.5));
  double total = 0.0;
  for (const auto& axis : s["axes"]) total += axis["moments"]["variance"].get<double>();
  CHECK(total == doctest::Approx(3 * predicted).epsilon(0.03));
  CHECK(s["bohr_radius_sq"]["estimate"].get<double>() == doctest::Approx(1.0).epsilon(0.03));
  CHECK(s["warnings"].empty());
  CHECK(s["resonance_integral"]["quadrature"].get<double>() ==
        doctest::Approx(s["resonance_integral"]["closed_form"].get<double>()).epsilon(0.01));
  CHECK(fs::exists(dir / "coordinates.csv"));
}

TEST_CASE("oscillator warns outside the resonance approximation") {
  const auto dir = scratch("oscillator_warn");
  const auto cfg = write_config("oscillator_warn", R"({"constants": {"c": 1}, "samples": 200})");
  const auto r = zpfsim({"oscillator", "--config", cfg.string(), "--seed", "1", "--out", dir.string(), "--json"});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
  const auto s = json::parse(r.out);
  CHECK(s["resonance_approximation_valid"] == false);
  CHECK(s["warnings"].size() == 1);
}

TEST_CASE("unresolvable linewidth exits with code 2") {
  const auto dir = scratch("oscillator_conv");
  const auto cfg = write_config("oscillator_conv", R"({
  "seed": 1,
  "samples": 10,
  "oscillator": {"nu0": 1, "gamma": 1e-16, "gamma_prime": 1, "mass": 1},
  "grid": {"box_side": 12.566370614359172, "omega_cutoff": 1.5}
})");
  const auto r = zpfsim({"oscillator", "--config", cfg.string(), "--out", dir.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("resolution") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "coordinates.csv"));
}

TEST_CASE("figure1 curves") {
  const auto dir = scratch("figure1");
  const auto r = zpfsim({"figure1", "--out", dir.string(), "--json"});
  REQUIRE(r.code == 0);
  const auto s = json::parse(r.out);
  CHECK(s["quantum_n12"]["interior_zeros"] == 12);
  CHECK(s["quantum_n12"]["normalization"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(s["classical"]["density_at_0"].get<double>() == doctest::Approx(1 / std::numbers::pi).epsilon(1e-15));
  CHECK(std::abs(s["quantum_n0"]["peak_x"].get<double>()) < 1e-3);
  for (const char* name : {"classical.csv", "quantum_n12.csv", "quantum_n0.csv"}) {
    const auto rows = read_rows(dir / name);
    CHECK(rows.size() == 3000);
    for (const auto& row : rows) CHECK(row[1] >= 0.0);
  }
}

TEST_CASE("generating sweep") {
  const auto dir = scratch("generating");
  auto r = zpfsim({"generating", "--out", dir.string(), "--json"});
  REQUIRE(r.code == 0);
  const auto s = json::parse(r.out);
  const auto& rows = s["convergence"];
  REQUIRE(rows.size() == 3);
  CHECK(rows[1]["max_deviation"].get<double>() < rows[0]["max_deviation"].get<double>());
  CHECK(rows[2]["max_deviation"].get<double>() < rows[1]["max_deviation"].get<double>());
  for (const auto& row : read_rows(dir / "generating.csv"))
    if (row[2] == 0.0) {
      CHECK(row[4] == 1.0);
      CHECK(row[5] == 1.0);
    }

  // one wavevector along z probed along x: a single contributing mode
  const auto cfg = write_config("generating", R"({"sweep": [{"wavevectors": [[0, 0, 2]], "volume": 1}],
  "direction": [1, 0, 0], "s_points": 11, "s_sigma_max": 3})");
  r = zpfsim({"generating", "--config", cfg.string(), "--out", (dir / "single").string()});
  REQUIRE(r.code == 0);
  const auto grid = build_grid_from_wavevectors(std::vector<Vec3>{{0, 0, 2}}, 1.0);
  const double sigma = grid[0].sigma;
  const auto rows1 = read_rows(dir / "single" / "generating.csv");
  REQUIRE(rows1.size() == 11);
  for (const auto& row : rows1) {
    const double s_val = row[2];
    const double expected = std::abs(std::cyl_bessel_j(0.0, std::numbers::sqrt2 * sigma * s_val) -
                                     std::exp(-sigma * sigma * s_val * s_val / 2));
    CHECK(row[6] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("runs are byte-identical and manifests re-ingest to the same run") {
  const auto dir = scratch("determinism");
  const std::vector<std::vector<std::string>> runs{
      {"sample-mode", "--seed", "9", "--samples", "500", "--kind", "boyer", "--r", "0.5", "1", "-2", "--t", "3"},
      {"total-field", "--seed", "9", "--samples", "300", "--component", "2"},
      {"oscillator", "--seed", "9", "--samples", "300", "--nu0", "2"},
      {"figure1"},
      {"generating"}};
  for (const auto& args : runs) {
    const std::string cmd = args.front();
    auto a = args, b = args;
    a.insert(a.end(), {"--out", (dir / (cmd + "_a")).string()});
    b.insert(b.end(), {"--out", (dir / (cmd + "_b")).string()});
    if (args.size() > 1) {
      a.insert(a.end(), {"--workers", "1"});
      b.insert(b.end(), {"--workers", "3"});
    }
    REQUIRE(zpfsim(a).code == 0);
    REQUIRE(zpfsim(b).code == 0);
    const auto c = zpfsim({cmd, "--config", (dir / (cmd + "_a") / "manifest.json").string(), "--out",
                           (dir / (cmd + "_c")).string()});
    REQUIRE(c.code == 0);
    for (const auto& entry : fs::directory_iterator(dir / (cmd + "_a"))) {
      const auto name = entry.path().filename();
      if (name == "manifest.json") continue;
      CHECK_MESSAGE(slurp(entry.path()) == slurp(dir / (cmd + "_b") / name), cmd << " " << name);
      CHECK_MESSAGE(slurp(entry.path()) == slurp(dir / (cmd + "_c") / name), cmd << " " << name);
    }
  }
}

TEST_CASE("manifest round trip at the config level") {
  for (auto cmd : {Command::SampleMode, Command::TotalField, Command::Oscillator, Command::Figure1, Command::Generating}) {
    RunConfig cfg = defaults_for(cmd);
    cfg.seed = 77;
    cfg.point = {{0.1, 0.2, 0.3}, 0.4};
    cfg.alpha = 0.05;
    finalize(cfg);
    RunConfig back = defaults_for(cmd);
    apply_config_text(back, manifest(cfg).dump(), "manifest");
    finalize(back);
    // figure1 and generating do not carry a point or alpha
    if (cmd == Command::Figure1 || cmd == Command::Generating) {
      back.point = cfg.point;
      back.alpha = cfg.alpha;
    }
    CHECK(back == cfg);
  }
}

TEST_CASE("config errors point at the offending line") {
  RunConfig cfg = defaults_for(Command::TotalField);
  const std::string text = "{\n  \"seed\": 1,\n  \"grid\": {\n    \"box_side\": -3,\n    \"omega_cutoff\": 2\n  }\n}\n";
  CHECK_THROWS_WITH_AS(apply_config_text(cfg, text, "run.json"), "run.json:4: grid.box_side: must be positive",
                       ValidationError);
  const std::string typo = "{\n  \"seed\": 1,\n  \"smaples\": 10\n}";
  CHECK_THROWS_WITH_AS(apply_config_text(cfg, typo, "run.json"), "run.json:3: smaples: unknown key", ValidationError);
  const std::string sweep = "{\"sweep\": [\n {\"box_side\": 1, \"omega_cutoff\": 1},\n {\"box_side\": 1, \"omega_cutoff\": \"x\"}\n]}";
  CHECK_THROWS_WITH_AS(apply_config_text(cfg, sweep, "s.json"), "s.json:3: sweep[1].omega_cutoff: expected a number",
                       ValidationError);
  CHECK_THROWS_AS(apply_config_text(cfg, "{\"seed\": 1,,}", "bad.json"), ValidationError);
  CHECK_THROWS_AS(apply_config_text(cfg, R"({"command": "figure1"})", "x.json"), ValidationError);
  CHECK_THROWS_AS(apply_config_text(cfg, R"({"kind": "Boyer"})", "x.json"), ValidationError);
  CHECK_THROWS_AS(apply_config_text(cfg, R"({"seed": -1})", "x.json"), ValidationError);
  CHECK_THROWS_AS(apply_config_text(cfg, R"({"oscillator": {"nu0": 1, "gamma": 1}})", "x.json"), ValidationError);

  const auto dir = scratch("config_error");
  const auto path = write_config("config_error", text);
  const auto r = zpfsim({"total-field", "--config", path.string(), "--out", dir.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("config.json:4:") != std::string::npos);
}
