#pragma once

#include "noisechaos/spectra.hpp"
#include "noisechaos/types.hpp"

namespace noisechaos {

using Vector8d = Eigen::Matrix<double, 8, 1>;
using Vector8cd = Eigen::Matrix<Complex, 8, 1>;
using Matrix8cd = Eigen::Matrix<Complex, 8, 8>;
using Matrix85d = Eigen::Matrix<double, 8, 5>;
using Vector5d = Eigen::Matrix<double, 5, 1>;

/// Coefficients of the graph-group expansion of the two-replica GUE channel
///   U2(t) = e^{-i E_ijkl t} sum_a f_a(t) F_a,   E_ijkl = E_i - E_j + E_k - E_l,
/// for constant noise lambda_ij = J / D. f(t) = coefficient_matrix(D) * rates(D, J, t).
/// Throws UnsupportedDimension for D < 3 (poles at D^2 = 1, 4).
Matrix85d f_coefficient_matrix(int D);

/// (1, e^{-Jt}, e^{-(2 - 2/D)Jt}, e^{-2Jt}, e^{-(2 + 2/D)Jt}).
Vector5d f_exponentials(int D, double J, double t);

Vector8d f_coefficients(int D, double J, double t);

/// Action of L2 on the graph groups, L2 F_a = sum_b M_ba F_b.
Matrix8cd build_M(int D, double J, Complex w);

/// Two-replica GUE channel bound to a spectrum and a noise strength.
class ChannelTwo {
public:
  ChannelTwo(Spectrum spec, double J);

  int dim() const noexcept { return spec_.dim(); }
  double J() const noexcept { return J_; }
  const Spectrum& spectrum() const noexcept { return spec_; }

  Vector8d f(double t) const { return f_coefficients(dim(), J_, t); }

  /// e^{-i E_ijkl t}.
  Complex phase(int i, int j, int k, int l, double t) const;

  /// sum_a f_a(t) V_a for a contraction vector V.
  Complex evaluate(const Vector8cd& contraction, double t) const;

private:
  Spectrum spec_;
  double J_;
};

enum class TwoReplicaKind { SffSquared, Otoc, TwoPointVariance };

/// An observable expressed by its contraction against the eight graph groups.
struct TwoReplicaObservable {
  TwoReplicaKind kind = TwoReplicaKind::SffSquared;
  Vector8cd contraction = Vector8cd::Zero();
};

/// V(SFF) = (D^4 K^2, 4 D^3 K, X, 8 D^2 K, 2 D^2, D^2 K(2t), 2D, 4D) with
/// K = K_0(t) the noiseless form factor and
/// X = Tr U0_{2t} (Tr U0_t^dagger)^2 + c.c.
TwoReplicaObservable sff_squared_observable(const Spectrum& spec, double t);

/// Traceless A, B: groups 1, 3, 4, 6 and 7 contribute,
///   V_1 = V_6 = OTOC_{J=0}(t),  V_3 = (2/D) Tr(A B0_t)^2,
///   V_4 = (4/D) Tr(A^2 (B0_t)^2),  V_7 = (1/D) Tr A^2 Tr B^2.
TwoReplicaObservable otoc_observable(const Spectrum& spec, double t, const MatrixXcd& A,
                                     const MatrixXcd& B);

struct SffMoments {
  double second_moment = 0.0;  ///< E[(Tr U Tr U^dagger)^2]
  double mean_squared = 0.0;   ///< (D^2 K_J(t))^2
  double variance() const noexcept { return second_moment - mean_squared; }
};

/// Second moment of |Tr U_t|^2 under constant GUE noise, with the square of
/// its mean from the single-replica form factor.
SffMoments sff_variance(const Spectrum& spec, double J, double t);

/// (1/D) E Tr(A B_t A B_t) for Hermitian traceless A, B. Throws
/// PreconditionError when either trace exceeds 1e-10 or an operator is not
/// Hermitian.
Complex otoc(const Spectrum& spec, double J, double t, const MatrixXcd& A, const MatrixXcd& B);

/// Noiseless pieces evaluated in the energy eigenbasis:
/// B0_t = U0^dagger B U0, OTOC_{J=0} = (1/D) Tr(A B0_t A B0_t).
MatrixXcd heisenberg_noiseless(const Spectrum& spec, const MatrixXcd& B, double t);
Complex otoc_noiseless(const Spectrum& spec, double t, const MatrixXcd& A, const MatrixXcd& B);

}  // namespace noisechaos
