#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "noisechaos/noise.hpp"
#include "noisechaos/series.hpp"
#include "noisechaos/spectra.hpp"
#include "noisechaos/types.hpp"

namespace noisechaos {

enum class StepScheme { ExpStep };

struct TrajectoryConfig {
  double dt = 1e-3;
  int n_traj = 1000;
  std::uint64_t seed = 0;
  int threads = 1;
  StepScheme scheme = StepScheme::ExpStep;
  /// Largest tolerated ||U^dagger U - I||_max at a recorded time.
  double unitarity_tol = 1e-8;
};

/// Throws InvalidStep unless dt > 0 and dt * max(lambda) * D <= 1, and
/// InvalidArgument for n_traj < 2 or threads < 1.
void validate(const TrajectoryConfig& cfg, const NoiseModel& model);

struct EnsembleEstimate {
  Complex mean = 0.0;
  double std_err = 0.0;  ///< sqrt(sum |x - mean|^2 / (n - 1)) / sqrt(n)
  int n = 0;
};

EnsembleEstimate estimate_from_samples(std::span<const Complex> samples);

/// One noisy realization U(t_k) on an ascending grid, U(0) = I. Each grid
/// interval is split into ceil(interval / dt) equal substeps of width h <= dt and
/// U <- exp(-i (H0 + eta) h) U with eta drawn at variance lambda / h.
/// Throws NumericalError if unitarity drifts past cfg.unitarity_tol.
std::vector<MatrixXcd> evolve_trajectory(const Spectrum& spec, const NoiseModel& model,
                                         const TrajectoryConfig& cfg,
                                         std::span<const double> t_grid, Rng& rng);

/// Per-realization scalar f(U_t, t).
using TrajectoryObservable = std::function<Complex(const MatrixXcd& U, double t)>;

struct NamedObservable {
  std::string name;
  TrajectoryObservable f;
};

/// Runs cfg.n_traj trajectories (trajectory k uses substream(cfg.seed, k)) and
/// returns one series per observable with stderr filled in. Samples are reduced
/// in trajectory order, so the result does not depend on cfg.threads.
std::vector<DiagnosticSeries> estimate_observables(const Spectrum& spec, const NoiseModel& model,
                                                   const TrajectoryConfig& cfg,
                                                   std::span<const double> t_grid,
                                                   const std::vector<NamedObservable>& obs);

// Observable factories.
NamedObservable sff_observable(int D);                       ///< |Tr U|^2 / D^2
NamedObservable sff_squared_mc_observable();                 ///< |Tr U|^4
NamedObservable two_point_mc_observable(const MatrixXcd& O);  ///< (1/D) Tr(O^dag U^dag O U)
NamedObservable otoc_mc_observable(const MatrixXcd& A, const MatrixXcd& B);
NamedObservable transfer_mc_observable(int i, int j);        ///< |U_ji|^2

DiagnosticSeries estimate_sff(const Spectrum& spec, const NoiseModel& model,
                              const TrajectoryConfig& cfg, std::span<const double> t_grid);
DiagnosticSeries estimate_two_point(const Spectrum& spec, const NoiseModel& model,
                                    const TrajectoryConfig& cfg, const MatrixXcd& O,
                                    std::span<const double> t_grid);
DiagnosticSeries estimate_otoc(const Spectrum& spec, const NoiseModel& model,
                               const TrajectoryConfig& cfg, const MatrixXcd& A,
                               const MatrixXcd& B, std::span<const double> t_grid);
DiagnosticSeries estimate_transfer(const Spectrum& spec, const NoiseModel& model,
                                   const TrajectoryConfig& cfg, int i, int j,
                                   std::span<const double> t_grid);
DiagnosticSeries estimate_sff_squared(const Spectrum& spec, const NoiseModel& model,
                                      const TrajectoryConfig& cfg, std::span<const double> t_grid);

}  // namespace noisechaos
