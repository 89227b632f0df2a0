// Experiment runner.
//
//   noisechaos run <config.json> [--out DIR] [--threads N] [--seed S]
//
// Exit status: 0 success, 1 config or I/O error, 2 oracle comparison failed.

#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "noisechaos/errors.hpp"
#include "noisechaos/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Noise-averaged spectral diagnostics"};
  app.require_subcommand(1);

  CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment from a JSON config");
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  run_cmd->add_option("config", config_path, "Experiment config (JSON)")->required();
  run_cmd->add_option("--out", out_dir, "Output directory (overrides output.dir)");
  run_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", seed, "Seed for spectra and trajectories");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  using namespace noisechaos;
  try {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(read_text_file(config_path));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(config_path, std::string("invalid JSON: ") + e.what());
    }
    ExperimentConfig cfg = parse_config(doc);
    apply_overrides(cfg, out_dir, threads, seed);
    const RunReport report = run(cfg);

    for (const OracleCheck& c : report.checks) {
      std::printf("%-12s J=%-6g max|analytic-mc|/stderr = %7.3f  %s\n", c.series.c_str(), c.J,
                  c.max_z, c.pass ? "pass" : "FAIL");
    }
    std::printf("wrote %zu files to %s (config %s)\n", report.files.size(), cfg.out_dir.c_str(),
                config_hash(cfg).c_str());
    return report.oracle_pass ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
