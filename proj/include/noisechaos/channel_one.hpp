#pragma once

#include <span>
#include <string>
#include <vector>

#include "noisechaos/noise.hpp"
#include "noisechaos/spectra.hpp"
#include "noisechaos/types.hpp"

namespace noisechaos {

// Index convention: U1_{ij;i'j'} = E[U_{ii'} U*_{jj'}], so that a state
// evolves as rho(t)_{ij} = sum_{i'j'} U1_{ij;i'j'} rho_{i'j'}.
//
// Every single-replica object is stored in the delta-structure basis
//   X_{ij;i'j'} = A_{ij} d_{ii'} d_{jj'}  +  B_{ii'} d_{ij} d_{i'j'}  +  G_{ij} d_{ij'} d_{ji'}
// ("identity", "cross" and "exchange" structures). The three D x D grids
// replace the dense D^2 x D^2 superoperator.

/// Generator L1 in delta-structure form.
///   GUE: w_ij = -iE_i + iE_j - (J_i + J_j)/2, cross = lambda, exchange = 0.
///   GOE: w_ij = -iE_i + iE_j - (J_i + J_j + lambda_ii + lambda_jj)/4,
///        cross = exchange = lambda / 2.
struct L1Generator {
  Ensemble ensemble = Ensemble::GUE;
  MatrixXcd w;
  MatrixXd cross;
  MatrixXd exchange;

  int dim() const noexcept { return static_cast<int>(w.rows()); }
};

L1Generator build_L1(const Spectrum& spec, const NoiseModel& model);

/// L1[rho]_ij = w_ij rho_ij + delta_ij sum_k cross_ik rho_kk + exchange_ij rho_ji.
MatrixXcd apply_generator(const L1Generator& gen, const MatrixXcd& rho);

enum class ChannelCase { GueConst, GueGeneral, GoeConst, GoeGeneral };
std::string to_string(ChannelCase c);

/// Noise-averaged single-replica channel U1(t) = E[U_t (x) U_t^*].
struct ChannelOne {
  ChannelCase case_tag = ChannelCase::GueConst;
  double time = 0.0;
  MatrixXcd A;  ///< identity structure
  MatrixXcd B;  ///< cross structure, indexed (i, i')
  MatrixXcd G;  ///< exchange structure; zero for GUE

  int dim() const noexcept { return static_cast<int>(A.rows()); }
};

/// Options for the ODE-backed general-lambda cases.
struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// Post-integration trace-preservation check; violation throws NumericalError.
  double trace_tol = 1e-9;
};

ChannelOne u1_gue_const(const Spectrum& spec, double J, double t);
ChannelOne u1_goe_const(const Spectrum& spec, double J, double t);

ChannelOne u1_gue_general(const Spectrum& spec, const NoiseModel& model, double t,
                          const OdeOptions& opts = {});
ChannelOne u1_goe_general(const Spectrum& spec, const NoiseModel& model, double t,
                          const OdeOptions& opts = {});

/// General-lambda channel on a whole ascending time grid with a single
/// integration pass. The ensemble is taken from the model.
std::vector<ChannelOne> u1_general_series(const Spectrum& spec, const NoiseModel& model,
                                          std::span<const double> times,
                                          const OdeOptions& opts = {});

/// Picks the closed form for constant profiles, the ODE path otherwise.
ChannelOne averaged_channel(const Spectrum& spec, const NoiseModel& model, double t,
                            const OdeOptions& opts = {});

/// Parameters of the GOE closed form for the identity/exchange pair:
///   s_ij  = sqrt((w_ij - w_ji)^2 + lambda_ij^2)        (principal root)
///   g_ij  = lambda_ij / s_ij
///   c_ij^{+-} = (s_ij +- (w_ij - w_ji)) / s_ij
///   z_ij^{+-} = ((w_ij + w_ji) +- s_ij) / 2
/// Undefined (non-finite) where s_ij = 0; the channel itself is evaluated in
/// a form that is regular there.
struct GoeClosedFormParams {
  MatrixXcd g;
  MatrixXcd c_plus, c_minus;
  MatrixXcd z_plus, z_minus;
};

GoeClosedFormParams goe_closed_form_params(const Spectrum& spec, const NoiseModel& model);

/// Identity and exchange coefficients from explicit params:
///   A = (c^- e^{z^- t} + c^+ e^{z^+ t}) / 2,  G = g (e^{z^+ t} - e^{z^- t}) / 2.
void goe_coefficients_from_params(const GoeClosedFormParams& p, double t, MatrixXcd& A,
                                  MatrixXcd& G);

/// Leading terms of the params for J << |E_ij| (constant profile, i != j).
/// Diagonal entries are set to their exact values.
GoeClosedFormParams goe_params_small_J(const Spectrum& spec, double J);
/// Leading terms of the params for J >> |E_ij| (constant profile, i != j).
GoeClosedFormParams goe_params_large_J(const Spectrum& spec, double J);

/// rho(t)_ij = A_ij rho_ij + delta_ij sum_k B_ik rho_kk + G_ij rho_ji.
MatrixXcd apply_channel(const ChannelOne& ch, const MatrixXcd& rho);

/// E[Tr(X U^dagger Y U)] = sum_{ijkl} X_ij Y_kl U1_{lk;ij}.
Complex contract_trace_pair(const ChannelOne& ch, const MatrixXcd& X, const MatrixXcd& Y);

/// (1/D^2) E[Tr U Tr U^dagger] = (1/D^2) sum_{ij} U1_{ij;ij}.
Complex sff_from_channel(const ChannelOne& ch);

/// E|U_ji|^2 = U1_{jj;ii}.
double transfer_from_channel(const ChannelOne& ch, int i, int j);

/// Dense D^2 x D^2 matrix with row (i*D + j) and column (i'*D + j').
/// Intended for small-D checks only (D <= 8).
MatrixXcd dense_superoperator(const ChannelOne& ch);
MatrixXcd dense_generator(const L1Generator& gen);

/// Choi matrix C_{(i i'),(j j')} = U1_{ij;i'j'}; Hermitian PSD iff the
/// channel is completely positive.
MatrixXcd choi_matrix(const ChannelOne& ch);

}  // namespace noisechaos
