#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "noisechaos/diagnostics.hpp"
#include "noisechaos/errors.hpp"
#include "noisechaos/experiment.hpp"

using namespace noisechaos;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kData = NOISECHAOS_TEST_DATA;

json load(const std::string& name) { return json::parse(read_text_file(kData + "/" + name)); }

std::string error_path(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "";
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("noisechaos_test_" + name);
  fs::remove_all(p);
  return p;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(NOISECHAOS_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config errors name the offending field") {
  const json base = load("sff_small.json");
  CHECK(error_path(base).empty());
  CHECK(error_path(load("bad_grid.json")) == "t_grid.n_points");

  json j = base;
  j["J_list"] = {1.0, 2.0, -1.0};
  CHECK(error_path(j) == "J_list[2]");
  j = base;
  j.erase("J_list");
  CHECK(error_path(j) == "J_list");
  j = base;
  j["experiment"] = "nope";
  CHECK(error_path(j) == "experiment");
  j = base;
  j["spectrum"]["dim"] = 1;
  CHECK(error_path(j) == "spectrum.dim");
  j = base;
  j["noise"]["ensemble"] = "gse";
  CHECK(error_path(j) == "noise.ensemble");
  j = base;
  j["t_grid"]["spacing"] = "log";
  CHECK(error_path(j) == "t_grid");
  j = base;
  j["experiment"] = "otoc_scan";
  CHECK(error_path(j) == "noise");
  j = base;
  j["experiment"] = "oracle_compare";
  CHECK(error_path(j) == "montecarlo");
  j["montecarlo"] = {{"dt", 0.01}, {"n_traj", 1}};
  CHECK(error_path(j) == "montecarlo.n_traj");
  j = base;
  j["lanczos"] = {{"digits", 20}};
  CHECK(error_path(j) == "lanczos.digits");
  j = base;
  j["observable"] = {{"i", 6}};
  CHECK(error_path(j) == "observable.i");
  j = base;
  j["spectrum"] = {{"file", kData + "/missing.json"}};
  CHECK(error_path(j) == "spectrum.file");
}

TEST_CASE("config hash ignores threads and output location") {
  ExperimentConfig a = parse_config(load("sff_small.json"));
  const std::string h = config_hash(a);
  apply_overrides(a, std::string("/tmp/elsewhere"), 8, std::nullopt);
  CHECK(config_hash(a) == h);
  apply_overrides(a, std::nullopt, std::nullopt, 77);
  CHECK(config_hash(a) != h);
  CHECK(a.spectrum.seed == 77);
}

TEST_CASE("scans write series that match the library") {
  ExperimentConfig cfg = parse_config(load("sff_small.json"));
  const fs::path out = scratch("scan");
  apply_overrides(cfg, out.string(), std::nullopt, std::nullopt);
  const RunReport rep = run(cfg);
  CHECK(rep.files.size() == 4);
  CHECK(fs::exists(out / "summary.json"));

  const json j = json::parse(read_text_file((out / "sff_scan_sff_J2.json").string()));
  const DiagnosticSeries s = series_from_json(j);
  CHECK(j["config_hash"] == config_hash(cfg));
  CHECK(!j["config"].contains("output"));
  const std::vector<double> grid = make_time_grid(0.0, 5.0, 11, GridSpacing::Linear);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double mean = 0.0;
    for (int r = 0; r < 4; ++r) mean += sff_goe_const_value(realization(cfg.spectrum, r), 2.0, grid[k]);
    CHECK(s.values[k].real() == doctest::Approx(mean / 4).epsilon(1e-12));
  }
  const std::string csv = read_text_file((out / "sff_scan_sff_J0.5.csv").string());
  CHECK(csv.rfind("# config_hash=" + config_hash(cfg) + "\nt,re,im,stderr\n", 0) == 0);

  // spectra from a file
  json fj = load("sff_small.json");
  fj["spectrum"] = {{"file", kData + "/levels.json"}};
  fj["experiment"] = "return_scan";
  fj["noise"] = {{"ensemble", "gue"}};
  fj["observable"] = {{"partition", "blocks"}, {"block_size", 2}};
  ExperimentConfig fc = parse_config(fj);
  CHECK(fc.spectrum.dim == 4);
  CHECK(fc.spectrum.n_realizations == 2);
  apply_overrides(fc, out.string(), std::nullopt, std::nullopt);
  CHECK(run(fc).files.size() == 4);
}

TEST_CASE("lanczos scan keeps a terminated chain") {
  json j = {{"experiment", "lanczos_scan"},
            {"spectrum", {{"dim", 4}}},
            {"J_list", {0.0, 1.0}},
            {"lanczos", {{"n_max", 12}, {"digits", 80}}}};
  ExperimentConfig cfg = parse_config(j);
  const fs::path out = scratch("lanczos");
  apply_overrides(cfg, out.string(), std::nullopt, std::nullopt);
  run(cfg);
  const DiagnosticSeries free =
      series_from_json(json::parse(read_text_file((out / "lanczos_scan_b_J0.json").string())));
  CHECK(free.values.size() == 12);
  CHECK(free.values[11].real() == doctest::Approx(12.0));
  const json one = json::parse(read_text_file((out / "lanczos_scan_b_J1.json").string()));
  CHECK(series_from_json(one).values.size() == 2);
  CHECK(one["metadata"]["extra"]["breakdown_level"] == 3);
}

TEST_CASE("command line exit codes") {
  const fs::path out = scratch("cli");
  CHECK(cli("run " + kData + "/sff_small.json --out " + out.string()) == 0);
  CHECK(fs::exists(out / "sff_scan_sff_J0.5.csv"));
  CHECK(cli("run " + kData + "/bad_grid.json --out " + out.string()) == 1);
  CHECK(cli("run " + kData + "/does_not_exist.json") == 1);
  CHECK(cli("run " + kData + "/levels.json --out " + out.string()) == 1);
  CHECK(cli("run " + kData + "/sff_small.json --threads 0") == 1);
  CHECK(cli("frobnicate") == 1);
  CHECK(cli("run " + kData + "/oracle_small.json --out " + out.string()) == 0);
  CHECK(cli("run " + kData + "/oracle_strict.json --out " + out.string()) == 2);
}

TEST_CASE("reruns are byte identical across thread counts") {
  const fs::path a = scratch("rerun_a"), b = scratch("rerun_b");
  REQUIRE(cli("run " + kData + "/oracle_small.json --threads 1 --out " + a.string()) == 0);
  REQUIRE(cli("run " + kData + "/oracle_small.json --threads 4 --out " + b.string()) == 0);
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const std::string name = entry.path().filename().string();
    if (name == "summary.json") continue;
    CAPTURE(name);
    CHECK(read_text_file(entry.path().string()) == read_text_file((b / name).string()));
    ++compared;
  }
  CHECK(compared == 20);
}
