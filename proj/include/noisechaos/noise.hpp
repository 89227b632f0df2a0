#pragma once

#include <string>
#include <variant>

#include "noisechaos/spectra.hpp"
#include "noisechaos/types.hpp"

namespace noisechaos {

enum class Ensemble { GUE, GOE };

std::string to_string(Ensemble e);
Ensemble ensemble_from_string(const std::string& s);

/// lambda_ij = J / D.
struct ConstantProfile {
  double J = 0.0;
};

/// Arbitrary symmetric non-negative lambda_ij.
struct MatrixProfile {
  MatrixXd lambda;
};

/// lambda_ij = (J / D) exp(-beta |E_i - E_j|); keeps its own copy of the levels.
struct GibbsProfile {
  double J = 0.0;
  double beta = 0.0;
  VectorXd energies;
};

using NoiseProfile = std::variant<ConstantProfile, MatrixProfile, GibbsProfile>;

/// White noise eta_ij(t) with E[eta_ij(t) eta_kl(t')] = lambda_ijkl delta(t - t').
/// GUE: lambda_ijkl = lambda_ij delta_il delta_jk.
/// GOE: lambda_ijkl = lambda_ij (delta_ik delta_jl + delta_il delta_jk) / 2.
class NoiseModel {
public:
  static NoiseModel constant(Ensemble ensemble, int dim, double J);
  static NoiseModel matrix(Ensemble ensemble, MatrixXd lambda);
  static NoiseModel gibbs(Ensemble ensemble, const Spectrum& spec, double J, double beta);

  Ensemble ensemble() const noexcept { return ensemble_; }
  const NoiseProfile& profile() const noexcept { return profile_; }
  int dim() const noexcept { return dim_; }

  /// Fully expanded D x D variance profile.
  const MatrixXd& lambda() const noexcept { return lambda_; }

  bool is_constant() const noexcept { return std::holds_alternative<ConstantProfile>(profile_); }
  /// J of the constant profile; throws InvalidArgument otherwise.
  double constant_J() const;

  /// Same ensemble and profile kind with the overall strength replaced by J.
  /// Only meaningful for constant and Gibbs profiles.
  NoiseModel with_strength(double J) const;

private:
  NoiseModel(Ensemble e, NoiseProfile p, int dim, MatrixXd lambda);

  Ensemble ensemble_;
  NoiseProfile profile_;
  int dim_;
  MatrixXd lambda_;
};

/// Short label such as "gue const J=1" or "goe gibbs J=1 beta=0.5".
std::string describe(const NoiseModel& model);

/// J_i = sum_k lambda_ik.
VectorXd row_sums(const NoiseModel& model);

/// Draws one time slice of the white noise regularized on a grid of width dt,
/// i.e. with variances lambda / dt in place of lambda delta(t - t').
/// Off-diagonal GUE entries split lambda_ij/(2 dt) between real and imaginary
/// parts; diagonals (both ensembles) have variance lambda_ii / dt; off-diagonal
/// GOE entries are real with variance lambda_ij / (2 dt).
MatrixXcd sample_noise_matrix(const NoiseModel& model, double dt, Rng& rng);

/// Reusable sampler with the standard deviations precomputed for one dt.
class NoiseSampler {
public:
  NoiseSampler(const NoiseModel& model, double dt);
  void sample(Rng& rng, MatrixXcd& out) const;
  double dt() const noexcept { return dt_; }

private:
  Ensemble ensemble_;
  double dt_;
  MatrixXd sd_;  // upper triangle: per-component sd; diagonal: real sd
};

}  // namespace noisechaos
