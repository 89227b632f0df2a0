#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "noisechaos/montecarlo.hpp"
#include "noisechaos/noise.hpp"
#include "noisechaos/series.hpp"
#include "noisechaos/spectra.hpp"

namespace noisechaos {

enum class ExperimentKind {
  SffScan,
  TwoPointScan,
  LanczosScan,
  OtocScan,
  TransferScan,
  ReturnScan,
  SffVarianceScan,
  OracleCompare
};

std::string to_string(ExperimentKind k);
ExperimentKind experiment_from_string(const std::string& s);

struct SpectrumSource {
  Ensemble sample = Ensemble::GUE;
  int dim = 0;
  int n_realizations = 1;
  std::uint64_t seed = 0;
  std::optional<std::string> file;  ///< JSON array of levels, or array of arrays
  std::vector<std::vector<double>> levels;  ///< contents of `file`, loaded at parse time
};

struct NoiseDescriptor {
  Ensemble ensemble = Ensemble::GUE;
  std::string profile = "const";  ///< "const" or "gibbs"
  double beta = 0.0;
};

struct TimeGridSpec {
  double t_min = 0.0;
  double t_max = 1.0;
  int n_points = 2;
  GridSpacing spacing = GridSpacing::Linear;
};

/// Operator used by two-point and OTOC scans: random Hermitian with
/// (1/D) Tr O^2 = 1, optionally traceless.
struct OperatorSpec {
  bool traceless = false;
  std::uint64_t seed = 1;
};

struct LanczosSpec {
  double alpha = 1.0;
  int n_max = 30;
  unsigned digits = 120;
  double tau = 1.0;  ///< Tr O Tr O^dagger / D^2
  double breakdown_tol = 1e-14;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::SffScan;
  SpectrumSource spectrum;
  NoiseDescriptor noise;
  TimeGridSpec t_grid;
  std::vector<double> J_list;
  std::optional<TrajectoryConfig> montecarlo;
  std::string out_dir = ".";
  bool write_csv = true;
  bool write_json = true;

  OperatorSpec op;
  int transfer_i = 0, transfer_j = 0;
  std::string partition = "eigenbasis";  ///< "eigenbasis" or "blocks"
  int block_size = 1;
  LanczosSpec lanczos;
  double oracle_sigma = 3.0;

  int threads = 1;

  /// The parsed document with defaults filled in; threads excluded.
  nlohmann::json canonical;
};

/// Parses and validates a config. Errors are ConfigError carrying the field path.
ExperimentConfig parse_config(const nlohmann::json& j);

/// Hash of the canonical config (thread count excluded, so outputs do not
/// depend on it).
std::string config_hash(const ExperimentConfig& cfg);

/// Applies command-line overrides; the seed replaces both the spectrum and
/// the Monte Carlo seed.
void apply_overrides(ExperimentConfig& cfg, const std::optional<std::string>& out_dir,
                     std::optional<int> threads, std::optional<std::uint64_t> seed);

struct OracleCheck {
  std::string series;
  double J = 0.0;
  double max_z = 0.0;  ///< max |analytic - MC| / stderr over the grid
  bool pass = false;
};

struct RunReport {
  std::vector<std::string> files;
  std::vector<OracleCheck> checks;
  bool oracle_pass = true;
  nlohmann::json summary;
};

/// Executes the experiment, writes series files and summary.json into
/// cfg.out_dir.
RunReport run(const ExperimentConfig& cfg);

/// Spectrum realization r of the configured source.
Spectrum realization(const SpectrumSource& src, int r);

MatrixXcd random_hermitian_operator(int D, Rng& rng, bool traceless);

}  // namespace noisechaos
