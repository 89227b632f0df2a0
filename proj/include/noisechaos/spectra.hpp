#pragma once

#include <vector>

#include "noisechaos/types.hpp"

namespace noisechaos {

/// Sorted real energy levels E_1 <= ... <= E_D of a diagonal Hamiltonian.
///
/// Levels are stored as shift + scale * offsets with scale > 0. Ordinary
/// spectra have scale 1 and shift 0; affine images (for instance the
/// noise-averaged effective Hamiltonian, whose levels are compressed by
/// e^{-Jt}) keep the offsets of their parent, so spacing ratios stay exact
/// even when the compressed levels are no longer resolvable in double
/// precision.
class Spectrum {
public:
  /// Sorts the levels. Throws InvalidDimension if fewer than two levels,
  /// InvalidArgument on non-finite input.
  explicit Spectrum(std::vector<double> energies);
  explicit Spectrum(const VectorXd& energies);

  /// Levels shift + scale * E_i of `base`. Requires scale > 0.
  static Spectrum affine(const Spectrum& base, double scale, double shift);

  int dim() const noexcept { return static_cast<int>(offsets_.size()); }
  const VectorXd& energies() const noexcept { return energies_; }
  double operator[](int i) const { return energies_[i]; }

  /// Ē = (1/D) sum_k E_k.
  double mean() const noexcept { return mean_; }

  const VectorXd& offsets() const noexcept { return offsets_; }
  double scale() const noexcept { return scale_; }
  double shift() const noexcept { return shift_; }

  std::vector<double> to_vector() const {
    return {energies_.data(), energies_.data() + energies_.size()};
  }

private:
  Spectrum(VectorXd offsets, double scale, double shift);
  void materialize();

  VectorXd offsets_;
  double scale_ = 1.0;
  double shift_ = 0.0;
  VectorXd energies_;
  double mean_ = 0.0;
};

struct LevelStatistics {
  std::vector<double> spacings;       ///< s_n = e_{n+1} - e_n, D-1 entries
  std::vector<double> ratios;         ///< r_n = s_n / s_{n-1}, D-2 entries
  std::vector<double> folded_ratios;  ///< min(r_n, 1/r_n)
  double mean_folded_ratio = 0.0;
};

/// Eigenvalues of a GUE matrix normalized to the semicircle on [-2, 2]:
/// diagonal N(0, 1/dim), off-diagonal real and imaginary parts N(0, 1/(2 dim)).
Spectrum sample_gue_spectrum(int dim, Rng& rng);

/// GOE counterpart: off-diagonal N(0, 1/dim), diagonal N(0, 2/dim).
Spectrum sample_goe_spectrum(int dim, Rng& rng);

/// Spacings and spacing ratios over all interior indices. Requires dim >= 3;
/// throws DegenerateSpectrum at the first zero spacing.
LevelStatistics level_statistics(const Spectrum& spec);

/// Mean folded ratio restricted to levels [first, last), e.g. the bulk.
double mean_folded_ratio(const LevelStatistics& stats, std::size_t first, std::size_t last);

}  // namespace noisechaos
