#pragma once

#include <span>
#include <vector>

#include "noisechaos/channel_one.hpp"
#include "noisechaos/noise.hpp"
#include "noisechaos/series.hpp"
#include "noisechaos/spectra.hpp"

namespace noisechaos {

// ---- noiseless building blocks (energy eigenbasis, explicit phase sums) ----

/// Tr U0_t = sum_i e^{-i E_i t}.
Complex noiseless_trace(const Spectrum& spec, double t);
/// K_0(t) = |Tr U0_t|^2 / D^2.
double sff_noiseless(const Spectrum& spec, double t);
/// C_0(t) = (1/D) Tr(O^dagger O0_t).
Complex two_point_noiseless(const Spectrum& spec, const MatrixXcd& O, double t);

// ---- spectral form factor ----

/// K_J(t) = e^{-Jt} K_0(t) + (1 - e^{-Jt}) / D^2.
double sff_gue_const_value(const Spectrum& spec, double J, double t);

/// K_J(t) = (1/D^2) sum_ij (c^- e^{z^- t} + c^+ e^{z^+ t}) / 2 + (1 - e^{-Jt/2}) / D^2
///        + (1/D) e^{-(D+1)Jt/(2D)} sinh(Jt/(2D)).
double sff_goe_const_value(const Spectrum& spec, double J, double t);

/// Leading small-J form (J << |E_ij|) of the GOE form factor, with
/// m = -(D+1)J/(2D) and x = Jt/(2D):
///   e^{mt} K_0 + (1/D) e^{mt} (cosh x - 1) + (1/D) e^{mt} sinh x + (1 - e^{-Jt/2}) / D^2.
double sff_goe_small_J(const Spectrum& spec, double J, double t);
/// Strong-noise form: e^{mt} cosh x + (1/D) e^{mt} sinh x + (1 - e^{-Jt/2}) / D^2.
double sff_goe_large_J(const Spectrum& spec, double J, double t);

DiagnosticSeries sff_gue_const(const Spectrum& spec, double J, std::span<const double> t_grid);
DiagnosticSeries sff_goe_const(const Spectrum& spec, double J, std::span<const double> t_grid);

// ---- two-point function ----

/// C_J(t) = e^{-Jt} C_0(t) + (1 - e^{-Jt}) Tr O Tr O^dagger / D^2.
Complex two_point_gue_const_value(const Spectrum& spec, double J, const MatrixXcd& O, double t);
/// GOE closed form: identity and exchange sums plus the universal
/// (1 - e^{-Jt/2}) Tr O Tr O^dagger / D^2.
Complex two_point_goe_const_value(const Spectrum& spec, double J, const MatrixXcd& O, double t);

DiagnosticSeries two_point_gue_const(const Spectrum& spec, double J, const MatrixXcd& O,
                                     std::span<const double> t_grid);
DiagnosticSeries two_point_goe_const(const Spectrum& spec, double J, const MatrixXcd& O,
                                     std::span<const double> t_grid);

/// (1/D) E Tr(O^dagger O(t)) for any single-replica channel.
Complex two_point_from_channel(const ChannelOne& ch, const MatrixXcd& O);

// ---- moments ----

/// Moments mu_{J;k}, k = 0..k_max, of C_J(-it) = sum_k mu_{J;k} t^k / k! given the
/// even noiseless moments mu_even[n] = mu_{2n}:
///   mu_{J;k} = sum_m binom(k, m) (iJ)^{k-m} mu_m + tau (delta_{k0} - (iJ)^k),
/// with tau = Tr O Tr O^dagger / D^2 and odd mu_m = 0. Needs mu_even.size() > k_max / 2.
std::vector<Complex> noisy_moments(std::span<const double> mu_even, double J, Complex trO,
                                   Complex trOdag, int D, int k_max);

// ---- effective Hamiltonian and r-parameter ----

/// Levels E_{J;i} = e^{-Jt} E_i + Ebar (1 - e^{-Jt}), kept as an exact affine
/// image of `spec` so spacing ratios are preserved bit for bit.
Spectrum effective_hamiltonian(const Spectrum& spec, double J, double t);

// ---- transfer and return probabilities ----

/// E(P_{j<-i}) = E|U_ji|^2 for constant GUE or GOE noise:
///   GUE: delta_ij e^{-Jt} + (1 - e^{-Jt}) / D,  GOE: the same with J -> J/2.
DiagnosticSeries transfer_probability(const Spectrum& spec, const NoiseModel& model, int i,
                                      int j, std::span<const double> t_grid);

/// Complete orthogonal family of projectors, sum_k P_k = I, P_k P_l = delta_kl P_k.
class ProjectorPartition {
public:
  /// Validates completeness, orthogonality and Hermiticity to `tol`.
  explicit ProjectorPartition(std::vector<MatrixXcd> projectors, double tol = 1e-10);

  /// Rank-one projectors onto the energy eigenstates.
  static ProjectorPartition eigenbasis(int D);
  /// Block projectors onto groups of energy eigenstates; groups must cover 0..D-1 once.
  static ProjectorPartition blocks(int D, const std::vector<std::vector<int>>& groups);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return projectors_.size(); }
  const std::vector<MatrixXcd>& projectors() const noexcept { return projectors_; }
  bool is_eigenbasis() const noexcept { return eigenbasis_; }

private:
  ProjectorPartition() = default;
  int dim_ = 0;
  bool eigenbasis_ = false;
  std::vector<MatrixXcd> projectors_;
};

/// P_{S;J}(t) = (1/D_S) sum_k E Tr(P_k(t) P_k), constant GUE noise, with
/// D_S = sum_k Tr P_k = D. The eigenbasis partition uses
/// e^{-Jt} + (1 - e^{-Jt}) / D; other partitions are contracted against U1.
DiagnosticSeries return_probability(const Spectrum& spec, double J,
                                    const ProjectorPartition& partition,
                                    std::span<const double> t_grid);

/// Return probability of an arbitrary partition under an arbitrary channel.
double return_probability_from_channel(const ChannelOne& ch, const ProjectorPartition& partition);

}  // namespace noisechaos
