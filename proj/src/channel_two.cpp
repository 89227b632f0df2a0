#include "noisechaos/channel_two.hpp"

#include <algorithm>
#include <cmath>

#include "noisechaos/diagnostics.hpp"
#include "noisechaos/errors.hpp"

namespace noisechaos {

namespace {

void check_two_replica_dim(int D) {
  if (D < 3) {
    throw UnsupportedDimension("two-replica coefficients need D >= 3, got D = " +
                               std::to_string(D));
  }
}

}  // namespace

Matrix85d f_coefficient_matrix(int D) {
  check_two_replica_dim(D);
  const double d = D;
  const double d2m4 = d * d - 4.0;
  const double d2m1 = d * d - 1.0;
  Matrix85d m;
  // clang-format off
  m << 0.0,          0.0,                      0.25,                           0.5,            0.25,
       0.0,          (d*d - 2.0)/(d*d2m4),     -1.0/(4.0*(d - 2.0)),           -1.0/(2.0*d),   -1.0/(4.0*(d + 2.0)),
       0.0,          0.0,                      -0.25,                          0.0,            0.25,
       0.0,          -1.0/d2m4,                1.0/(4.0*(d - 2.0)),            0.0,            -1.0/(4.0*(d + 2.0)),
       1.0/d2m1,     -2.0/d2m4,                1.0/(2.0*(d - 1.0)*(d - 2.0)),  0.0,            1.0/(2.0*(d + 1.0)*(d + 2.0)),
       0.0,          0.0,                      0.25,                           -0.5,           0.25,
       -1.0/(d*d2m1), 4.0/(d*d2m4),            -1.0/(2.0*(d - 1.0)*(d - 2.0)), 0.0,            1.0/(2.0*(d + 1.0)*(d + 2.0)),
       0.0,          2.0/(d*d2m4),             -1.0/(4.0*(d - 2.0)),           1.0/(2.0*d),    -1.0/(4.0*(d + 2.0));
  // clang-format on
  return m;
}

Vector5d f_exponentials(int D, double J, double t) {
  const double jt = J * t;
  Vector5d e;
  e << 1.0, std::exp(-jt), std::exp(-(2.0 - 2.0 / D) * jt), std::exp(-2.0 * jt),
      std::exp(-(2.0 + 2.0 / D) * jt);
  return e;
}

Vector8d f_coefficients(int D, double J, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("time must be >= 0");
  const Matrix85d c = f_coefficient_matrix(D);
  if (t == 0.0 || J == 0.0) {
    // row sums are zero only up to rounding
    Vector8d e1 = Vector8d::Zero();
    e1[0] = 1.0;
    return e1;
  }
  return c * f_exponentials(D, J, t);
}

Matrix8cd build_M(int D, double J, Complex w) {
  const Complex a = J / D;
  Matrix8cd m = Matrix8cd::Zero();
  m(0, 0) = w;            m(0, 2) = -2.0 * a;
  m(1, 0) = a;            m(1, 1) = J + w;
  m(2, 0) = -a;           m(2, 2) = w;          m(2, 5) = -a;
  m(3, 2) = a;            m(3, 3) = J + w;
  m(4, 1) = 2.0 * a;      m(4, 4) = 2.0 * J + w; m(4, 7) = 2.0 * a;
  m(5, 2) = -2.0 * a;     m(5, 5) = w;
  m(6, 3) = 4.0 * a;      m(6, 6) = 2.0 * J + w;
  m(7, 5) = a;            m(7, 7) = J + w;
  return m;
}

ChannelTwo::ChannelTwo(Spectrum spec, double J) : spec_(std::move(spec)), J_(J) {
  check_two_replica_dim(spec_.dim());
  if (!(J >= 0.0)) throw InvalidArgument("J must be >= 0");
}

Complex ChannelTwo::phase(int i, int j, int k, int l, double t) const {
  const VectorXd& e = spec_.energies();
  return std::exp(Complex(0.0, -(e[i] - e[j] + e[k] - e[l]) * t));
}

Complex ChannelTwo::evaluate(const Vector8cd& contraction, double t) const {
  return f(t).cast<Complex>().dot(contraction);
}

TwoReplicaObservable sff_squared_observable(const Spectrum& spec, double t) {
  const double d = spec.dim();
  const double k1 = sff_noiseless(spec, t);
  const double k2 = sff_noiseless(spec, 2.0 * t);
  const Complex tr1 = noiseless_trace(spec, t);
  const Complex tr2 = noiseless_trace(spec, 2.0 * t);
  const double x = 2.0 * (tr2 * std::conj(tr1) * std::conj(tr1)).real();
  TwoReplicaObservable obs;
  obs.kind = TwoReplicaKind::SffSquared;
  obs.contraction << d * d * d * d * k1 * k1, 4.0 * d * d * d * k1, x, 8.0 * d * d * k1,
      2.0 * d * d, d * d * k2, 2.0 * d, 4.0 * d;
  return obs;
}

MatrixXcd heisenberg_noiseless(const Spectrum& spec, const MatrixXcd& B, double t) {
  const VectorXcd ph = (Complex(0.0, t) * spec.energies().cast<Complex>()).array().exp().matrix();
  // (B0_t)_ij = e^{i E_i t} B_ij e^{-i E_j t}
  return ph.asDiagonal() * B * ph.conjugate().asDiagonal();
}

Complex otoc_noiseless(const Spectrum& spec, double t, const MatrixXcd& A, const MatrixXcd& B) {
  const MatrixXcd bt = heisenberg_noiseless(spec, B, t);
  const MatrixXcd abt = A * bt;
  // Tr(X X) = sum_ij X_ij X_ji
  return abt.cwiseProduct(abt.transpose()).sum() / static_cast<double>(spec.dim());
}

TwoReplicaObservable otoc_observable(const Spectrum& spec, double t, const MatrixXcd& A,
                                     const MatrixXcd& B) {
  const double d = spec.dim();
  const MatrixXcd bt = heisenberg_noiseless(spec, B, t);
  const Complex tr = A.cwiseProduct(bt.transpose()).sum();
  const Complex o0 = otoc_noiseless(spec, t, A, B);
  const MatrixXcd a2 = A * A;
  const Complex tr_a2b2 = a2.cwiseProduct((bt * bt).transpose()).sum();
  const Complex tr_a2 = a2.trace();
  const Complex tr_b2 = (B * B).trace();
  TwoReplicaObservable obs;
  obs.kind = TwoReplicaKind::Otoc;
  obs.contraction(0) = o0;
  obs.contraction(2) = (2.0 / d) * tr * tr;
  obs.contraction(3) = (4.0 / d) * tr_a2b2;
  obs.contraction(5) = o0;
  obs.contraction(6) = tr_a2 * tr_b2 / d;
  return obs;
}

SffMoments sff_variance(const Spectrum& spec, double J, double t) {
  const ChannelTwo ch(spec, J);
  SffMoments m;
  m.second_moment = ch.evaluate(sff_squared_observable(spec, t).contraction, t).real();
  const double d2 = static_cast<double>(spec.dim()) * spec.dim();
  const double mean = d2 * sff_gue_const_value(spec, J, t);
  m.mean_squared = mean * mean;
  return m;
}

Complex otoc(const Spectrum& spec, double J, double t, const MatrixXcd& A, const MatrixXcd& B) {
  const int d = spec.dim();
  if (A.rows() != d || A.cols() != d || B.rows() != d || B.cols() != d) {
    throw DimensionMismatch("OTOC operators must be D x D");
  }
  if (std::abs(A.trace()) > 1e-10 || std::abs(B.trace()) > 1e-10) {
    throw PreconditionError("OTOC closed form needs traceless A and B");
  }
  const double herm_tol = 1e-10 * std::max({1.0, A.cwiseAbs().maxCoeff(), B.cwiseAbs().maxCoeff()});
  if ((A - A.adjoint()).cwiseAbs().maxCoeff() > herm_tol ||
      (B - B.adjoint()).cwiseAbs().maxCoeff() > herm_tol) {
    throw PreconditionError("OTOC closed form needs Hermitian A and B");
  }
  const ChannelTwo ch(spec, J);
  return ch.evaluate(otoc_observable(spec, t, A, B).contraction, t);
}

}  // namespace noisechaos
