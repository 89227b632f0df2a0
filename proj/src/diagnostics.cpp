#include "noisechaos/diagnostics.hpp"

#include <cmath>
#include <sstream>

#include "noisechaos/errors.hpp"

namespace noisechaos {

namespace {

std::string const_noise_label(Ensemble e, double J) {
  std::ostringstream os;
  os.precision(17);
  os << to_string(e) << " const J=" << J;
  return os.str();
}

DiagnosticSeries make_series(std::string name, const Spectrum& spec, std::string noise,
                             std::span<const double> t_grid) {
  DiagnosticSeries s;
  s.name = std::move(name);
  s.times.assign(t_grid.begin(), t_grid.end());
  s.values.reserve(t_grid.size());
  s.spectrum_hash = spectrum_hash(spec);
  s.noise = std::move(noise);
  s.dim = spec.dim();
  return s;
}

void check_operator(const Spectrum& spec, const MatrixXcd& O) {
  if (O.rows() != spec.dim() || O.cols() != spec.dim()) {
    throw DimensionMismatch("operator must be D x D");
  }
}

// (1/D^2) (1 - e^{-rate t}) written with expm1.
double universal_floor(int D, double rate_t) {
  return -std::expm1(-rate_t) / (static_cast<double>(D) * D);
}

}  // namespace

Complex noiseless_trace(const Spectrum& spec, double t) {
  Complex sum = 0.0;
  for (int i = 0; i < spec.dim(); ++i) sum += std::exp(Complex(0.0, -spec[i] * t));
  return sum;
}

double sff_noiseless(const Spectrum& spec, double t) {
  const double d = spec.dim();
  return std::norm(noiseless_trace(spec, t)) / (d * d);
}

Complex two_point_noiseless(const Spectrum& spec, const MatrixXcd& O, double t) {
  check_operator(spec, O);
  const int d = spec.dim();
  // (1/D) sum_ij conj(O_ji) O_ji e^{i (E_j - E_i) t}
  Complex sum = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      sum += std::norm(O(j, i)) * std::exp(Complex(0.0, (spec[j] - spec[i]) * t));
    }
  }
  return sum / static_cast<double>(d);
}

double sff_gue_const_value(const Spectrum& spec, double J, double t) {
  return std::exp(-J * t) * sff_noiseless(spec, t) + universal_floor(spec.dim(), J * t);
}

double sff_goe_const_value(const Spectrum& spec, double J, double t) {
  const ChannelOne ch = u1_goe_const(spec, J, t);
  const double d = spec.dim();
  const double m = -(d + 1.0) * J / (2.0 * d);
  const double x = J * t / (2.0 * d);
  return ch.A.sum().real() / (d * d) + universal_floor(spec.dim(), 0.5 * J * t) +
         std::exp(m * t) * std::sinh(x) / d;
}

double sff_goe_small_J(const Spectrum& spec, double J, double t) {
  const double d = spec.dim();
  const double em = std::exp(-(d + 1.0) * J * t / (2.0 * d));
  const double x = J * t / (2.0 * d);
  return em * sff_noiseless(spec, t) + em * (std::cosh(x) - 1.0) / d + em * std::sinh(x) / d +
         universal_floor(spec.dim(), 0.5 * J * t);
}

double sff_goe_large_J(const Spectrum& spec, double J, double t) {
  const double d = spec.dim();
  const double em = std::exp(-(d + 1.0) * J * t / (2.0 * d));
  const double x = J * t / (2.0 * d);
  return em * std::cosh(x) + em * std::sinh(x) / d + universal_floor(spec.dim(), 0.5 * J * t);
}

DiagnosticSeries sff_gue_const(const Spectrum& spec, double J, std::span<const double> t_grid) {
  DiagnosticSeries s = make_series("sff", spec, const_noise_label(Ensemble::GUE, J), t_grid);
  for (double t : t_grid) s.values.emplace_back(sff_gue_const_value(spec, J, t));
  s.validate();
  return s;
}

DiagnosticSeries sff_goe_const(const Spectrum& spec, double J, std::span<const double> t_grid) {
  DiagnosticSeries s = make_series("sff", spec, const_noise_label(Ensemble::GOE, J), t_grid);
  for (double t : t_grid) s.values.emplace_back(sff_goe_const_value(spec, J, t));
  s.validate();
  return s;
}

Complex two_point_gue_const_value(const Spectrum& spec, double J, const MatrixXcd& O, double t) {
  check_operator(spec, O);
  const Complex tr = O.trace();
  return std::exp(-J * t) * two_point_noiseless(spec, O, t) +
         universal_floor(spec.dim(), J * t) * tr * std::conj(tr);
}

Complex two_point_goe_const_value(const Spectrum& spec, double J, const MatrixXcd& O, double t) {
  check_operator(spec, O);
  const ChannelOne ch = u1_goe_const(spec, J, t);
  const double d = spec.dim();
  const MatrixXcd od = O.adjoint();
  // identity: A_ij Od_ij O_ji; exchange: G_ij Od_ji O_ji
  const Complex id = ch.A.cwiseProduct(od).cwiseProduct(O.transpose()).sum();
  const Complex ex = ch.G.cwiseProduct(od.transpose()).cwiseProduct(O.transpose()).sum();
  const Complex tr = O.trace();
  return (id + ex) / d + universal_floor(spec.dim(), 0.5 * J * t) * tr * std::conj(tr);
}

DiagnosticSeries two_point_gue_const(const Spectrum& spec, double J, const MatrixXcd& O,
                                     std::span<const double> t_grid) {
  DiagnosticSeries s =
      make_series("two_point", spec, const_noise_label(Ensemble::GUE, J), t_grid);
  for (double t : t_grid) s.values.push_back(two_point_gue_const_value(spec, J, O, t));
  s.validate();
  return s;
}

DiagnosticSeries two_point_goe_const(const Spectrum& spec, double J, const MatrixXcd& O,
                                     std::span<const double> t_grid) {
  DiagnosticSeries s =
      make_series("two_point", spec, const_noise_label(Ensemble::GOE, J), t_grid);
  for (double t : t_grid) s.values.push_back(two_point_goe_const_value(spec, J, O, t));
  s.validate();
  return s;
}

Complex two_point_from_channel(const ChannelOne& ch, const MatrixXcd& O) {
  return contract_trace_pair(ch, O.adjoint(), O) / static_cast<double>(ch.dim());
}

std::vector<Complex> noisy_moments(std::span<const double> mu_even, double J, Complex trO,
                                   Complex trOdag, int D, int k_max) {
  if (k_max < 0) throw InvalidArgument("k_max must be >= 0");
  if (D < 1) throw InvalidDimension("D must be positive");
  if (mu_even.size() <= static_cast<std::size_t>(k_max / 2)) {
    throw InvalidArgument("need even moments up to mu_" + std::to_string(2 * (k_max / 2)));
  }
  const Complex tau = trO * trOdag / (static_cast<double>(D) * D);
  const Complex ij(0.0, J);

  std::vector<Complex> ij_pow(k_max + 1);
  ij_pow[0] = 1.0;
  for (int k = 1; k <= k_max; ++k) ij_pow[k] = ij_pow[k - 1] * ij;

  std::vector<Complex> out(k_max + 1);
  std::vector<double> binom(k_max + 1, 0.0);
  binom[0] = 1.0;
  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) {
      for (int m = k; m > 0; --m) binom[m] += binom[m - 1];
    }
    Complex sum = 0.0;
    for (int m = 0; m <= k; m += 2) sum += binom[m] * ij_pow[k - m] * mu_even[m / 2];
    sum += tau * ((k == 0 ? 1.0 : 0.0) - ij_pow[k]);
    out[k] = sum;
  }
  return out;
}

Spectrum effective_hamiltonian(const Spectrum& spec, double J, double t) {
  if (!(J >= 0.0) || !(t >= 0.0)) throw InvalidArgument("J and t must be >= 0");
  const double a = std::exp(-J * t);
  if (!(a > 0.0)) throw NumericalError("e^{-Jt} underflows; levels fully collapsed");
  return Spectrum::affine(spec, a, -std::expm1(-J * t) * spec.mean());
}

DiagnosticSeries transfer_probability(const Spectrum& spec, const NoiseModel& model, int i,
                                      int j, std::span<const double> t_grid) {
  const int d = spec.dim();
  if (model.dim() != d) throw DimensionMismatch("noise model and spectrum dimensions differ");
  if (i < 0 || j < 0 || i >= d || j >= d) throw InvalidArgument("transfer indices out of range");
  DiagnosticSeries s;
  if (model.is_constant()) {
    const double J = model.constant_J();
    const double rate = model.ensemble() == Ensemble::GUE ? J : 0.5 * J;
    s = make_series("transfer", spec, const_noise_label(model.ensemble(), J), t_grid);
    for (double t : t_grid) {
      const double e = std::exp(-rate * t);
      s.values.emplace_back((i == j ? e : 0.0) - std::expm1(-rate * t) / d);
    }
  } else {
    s = make_series("transfer", spec, to_string(model.ensemble()) + " general", t_grid);
    for (const ChannelOne& ch : u1_general_series(spec, model, t_grid)) {
      s.values.emplace_back(transfer_from_channel(ch, i, j));
    }
  }
  s.extra["i"] = i;
  s.extra["j"] = j;
  s.validate();
  return s;
}

ProjectorPartition::ProjectorPartition(std::vector<MatrixXcd> projectors, double tol) {
  if (projectors.empty()) throw InvalidArgument("partition needs at least one projector");
  const Eigen::Index d = projectors.front().rows();
  MatrixXcd sum = MatrixXcd::Zero(d, d);
  for (std::size_t k = 0; k < projectors.size(); ++k) {
    const MatrixXcd& p = projectors[k];
    if (p.rows() != d || p.cols() != d) throw DimensionMismatch("projectors must be D x D");
    if ((p - p.adjoint()).cwiseAbs().maxCoeff() > tol) {
      throw InvalidArgument("projector " + std::to_string(k) + " is not Hermitian");
    }
    for (std::size_t l = 0; l < projectors.size(); ++l) {
      const MatrixXcd prod = p * projectors[l];
      const double err = (l == k ? (prod - p) : prod).cwiseAbs().maxCoeff();
      if (err > tol) {
        throw InvalidArgument("projectors " + std::to_string(k) + " and " + std::to_string(l) +
                              " violate P_k P_l = delta_kl P_k");
      }
    }
    sum += p;
  }
  if ((sum - MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() > tol) {
    throw InvalidArgument("projectors do not sum to the identity");
  }
  dim_ = static_cast<int>(d);
  projectors_ = std::move(projectors);
}

ProjectorPartition ProjectorPartition::eigenbasis(int D) {
  if (D < 1) throw InvalidDimension("D must be positive");
  ProjectorPartition p;
  p.dim_ = D;
  p.eigenbasis_ = true;
  for (int k = 0; k < D; ++k) {
    MatrixXcd m = MatrixXcd::Zero(D, D);
    m(k, k) = 1.0;
    p.projectors_.push_back(std::move(m));
  }
  return p;
}

ProjectorPartition ProjectorPartition::blocks(int D, const std::vector<std::vector<int>>& groups) {
  std::vector<int> seen(D, 0);
  std::vector<MatrixXcd> proj;
  for (const auto& g : groups) {
    MatrixXcd m = MatrixXcd::Zero(D, D);
    for (int k : g) {
      if (k < 0 || k >= D) throw InvalidArgument("block index out of range");
      if (seen[k]++) throw InvalidArgument("level " + std::to_string(k) + " in two blocks");
      m(k, k) = 1.0;
    }
    proj.push_back(std::move(m));
  }
  for (int k = 0; k < D; ++k) {
    if (!seen[k]) throw InvalidArgument("level " + std::to_string(k) + " not in any block");
  }
  ProjectorPartition p(std::move(proj));
  p.eigenbasis_ = static_cast<int>(groups.size()) == D;
  return p;
}

double return_probability_from_channel(const ChannelOne& ch, const ProjectorPartition& partition) {
  if (partition.dim() != ch.dim()) throw DimensionMismatch("partition and channel dims differ");
  Complex sum = 0.0;
  for (const MatrixXcd& p : partition.projectors()) sum += contract_trace_pair(ch, p, p);
  return sum.real() / static_cast<double>(ch.dim());
}

DiagnosticSeries return_probability(const Spectrum& spec, double J,
                                    const ProjectorPartition& partition,
                                    std::span<const double> t_grid) {
  const int d = spec.dim();
  if (partition.dim() != d) throw DimensionMismatch("partition and spectrum dims differ");
  DiagnosticSeries s =
      make_series("return_probability", spec, const_noise_label(Ensemble::GUE, J), t_grid);
  for (double t : t_grid) {
    if (partition.is_eigenbasis()) {
      s.values.emplace_back(std::exp(-J * t) - std::expm1(-J * t) / d);
    } else {
      s.values.emplace_back(return_probability_from_channel(u1_gue_const(spec, J, t), partition));
    }
  }
  s.extra["partition_size"] = partition.size();
  s.validate();
  return s;
}

}  // namespace noisechaos
