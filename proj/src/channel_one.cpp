#include "noisechaos/channel_one.hpp"

#include <algorithm>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "noisechaos/errors.hpp"

namespace noisechaos {

using namespace std::complex_literals;

std::string to_string(ChannelCase c) {
  switch (c) {
    case ChannelCase::GueConst: return "gue_const";
    case ChannelCase::GueGeneral: return "gue_general";
    case ChannelCase::GoeConst: return "goe_const";
    case ChannelCase::GoeGeneral: return "goe_general";
  }
  return "unknown";
}

namespace {

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("time must be finite and >= 0");
}

void check_dims(const Spectrum& spec, const NoiseModel& model) {
  if (spec.dim() != model.dim()) {
    throw DimensionMismatch("spectrum has dim " + std::to_string(spec.dim()) +
                            " but noise model has dim " + std::to_string(model.dim()));
  }
}

void check_square(const ChannelOne& ch, const MatrixXcd& m) {
  if (m.rows() != ch.dim() || m.cols() != ch.dim()) {
    throw DimensionMismatch("operator shape does not match channel dimension");
  }
}

// (e^{a t} - e^{b t}) / (a - b), regular as a -> b.
Complex exp_divided_difference(Complex a, Complex b, double t) {
  const Complex h = 0.5 * (a - b) * t;
  if (std::abs(h) < 1e-4) {
    const Complex h2 = h * h;
    return t * std::exp(0.5 * (a + b) * t) * (1.0 + h2 / 6.0 + h2 * h2 / 120.0);
  }
  return (std::exp(a * t) - std::exp(b * t)) / (a - b);
}

/// Identity/exchange pair for one (i, j): solves
///   C' = w_ij C + (lambda/2) G_ji,   G_ji' = w_ji G_ji + (lambda/2) C
/// from (1, 0), written so it stays finite where s -> 0.
void goe_pair(Complex w_ij, Complex w_ji, double lambda, double t, Complex& c, Complex& g) {
  const Complex m = 0.5 * (w_ij + w_ji);
  const Complex delta = w_ij - w_ji;
  const Complex s = std::sqrt(delta * delta + lambda * lambda);
  const Complex zp = m + 0.5 * s;
  const Complex zm = m - 0.5 * s;
  const Complex avg = 0.5 * (std::exp(zp * t) + std::exp(zm * t));
  const Complex dd = exp_divided_difference(zp, zm, t);
  c = avg + 0.5 * delta * dd;
  g = 0.5 * lambda * dd;
}

MatrixXcd gue_w(const Spectrum& spec, const VectorXd& row_sum) {
  const int d = spec.dim();
  MatrixXcd w(d, d);
  const VectorXd& e = spec.energies();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      w(i, j) = Complex(-0.5 * (row_sum[i] + row_sum[j]), -(e[i] - e[j]));
    }
  }
  return w;
}

MatrixXcd goe_w(const Spectrum& spec, const MatrixXd& lambda, const VectorXd& row_sum) {
  const int d = spec.dim();
  MatrixXcd w(d, d);
  const VectorXd& e = spec.energies();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      w(i, j) = Complex(-0.25 * (row_sum[i] + row_sum[j] + lambda(i, i) + lambda(j, j)),
                        -(e[i] - e[j]));
    }
  }
  return w;
}

void fill_goe_pairs(const MatrixXcd& w, const MatrixXd& lambda, double t, MatrixXcd& A,
                    MatrixXcd& G) {
  const Eigen::Index d = w.rows();
  A.resize(d, d);
  G.resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      goe_pair(w(i, j), w(j, i), lambda(i, j), t, A(i, j), G(i, j));
    }
  }
}

/// Cross-structure coefficient of the general-lambda channels:
///   B' = rate (lambda - diag J) B + rate lambda diag(e^{-rate J t}),  B(0) = 0,
/// with rate = 1 (GUE) or 1/2 (GOE). B is real.
class CrossCoefficientSystem {
public:
  using State = std::vector<double>;

  CrossCoefficientSystem(const MatrixXd& lambda, const VectorXd& row_sum, double rate)
      : d_(lambda.rows()), rate_(rate), row_sum_(row_sum), lambda_(rate * lambda) {
    P_ = lambda_;
    P_.diagonal() -= rate * row_sum;
  }

  void operator()(const State& x, State& dxdt, double t) const {
    using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMat> b(x.data(), d_, d_);
    Eigen::Map<RowMat> db(dxdt.data(), d_, d_);
    const Eigen::RowVectorXd decay = (-rate_ * t * row_sum_.array()).exp().matrix().transpose();
    db.noalias() = P_ * b;
    db += lambda_ * decay.asDiagonal();
  }

  Eigen::Index dim() const noexcept { return d_; }

private:
  Eigen::Index d_;
  double rate_;
  VectorXd row_sum_;
  MatrixXd lambda_;
  MatrixXd P_;
};

std::vector<MatrixXd> integrate_cross(const MatrixXd& lambda, const VectorXd& row_sum,
                                      double rate, std::span<const double> times,
                                      const OdeOptions& opts) {
  namespace odeint = boost::numeric::odeint;
  using State = CrossCoefficientSystem::State;

  for (std::size_t k = 0; k < times.size(); ++k) {
    check_time(times[k]);
    if (k > 0 && !(times[k] > times[k - 1])) {
      throw InvalidArgument("time grid must be strictly increasing");
    }
  }
  std::vector<MatrixXd> out;
  out.reserve(times.size());
  if (times.empty()) return out;

  CrossCoefficientSystem system(lambda, row_sum, rate);
  const Eigen::Index d = system.dim();

  std::vector<double> grid;
  grid.reserve(times.size() + 1);
  const bool prepend_zero = times.front() > 0.0;
  if (prepend_zero) grid.push_back(0.0);
  grid.insert(grid.end(), times.begin(), times.end());

  State x(static_cast<std::size_t>(d * d), 0.0);
  std::size_t seen = 0;
  auto observer = [&](const State& state, double) {
    if (seen++ == 0 && prepend_zero) return;
    using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    out.emplace_back(Eigen::Map<const RowMat>(state.data(), d, d));
  };

  if (grid.size() == 1) {
    out.emplace_back(MatrixXd::Zero(d, d));
    return out;
  }
  const double scale = std::max(1.0, rate * row_sum.maxCoeff());
  const double dt0 = std::min(1e-3 / scale, 0.5 * (grid[1] - grid[0]));
  try {
    auto stepper = odeint::make_dense_output(opts.abs_tol, opts.rel_tol,
                                             odeint::runge_kutta_dopri5<State>());
    odeint::integrate_times(stepper, std::ref(system), x, grid.begin(), grid.end(), dt0, observer,
                            odeint::max_step_checker(1000000));
  } catch (const std::exception& ex) {
    throw NumericalError(std::string("cross-coefficient integration failed: ") + ex.what());
  }
  if (out.size() != times.size()) {
    throw NumericalError("cross-coefficient integration produced " + std::to_string(out.size()) +
                         " of " + std::to_string(times.size()) + " samples");
  }
  return out;
}

double trace_defect(const ChannelOne& ch) {
  // sum_i U1_{ii;kk} = A_kk + G_kk + sum_i B_ik must be 1 for every k.
  double worst = 0.0;
  for (int k = 0; k < ch.dim(); ++k) {
    const Complex s = ch.A(k, k) + ch.G(k, k) + ch.B.col(k).sum();
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

std::vector<ChannelOne> general_series(const Spectrum& spec, const NoiseModel& model,
                                       std::span<const double> times, const OdeOptions& opts) {
  check_dims(spec, model);
  const VectorXd js = row_sums(model);
  const MatrixXd& lambda = model.lambda();
  const bool gue = model.ensemble() == Ensemble::GUE;
  const double rate = gue ? 1.0 : 0.5;
  const MatrixXcd w = gue ? gue_w(spec, js) : goe_w(spec, lambda, js);
  const std::vector<MatrixXd> cross = integrate_cross(lambda, js, rate, times, opts);

  std::vector<ChannelOne> out;
  out.reserve(times.size());
  const int d = spec.dim();
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    ChannelOne ch;
    ch.time = t;
    ch.B = cross[k].cast<Complex>();
    if (gue) {
      ch.case_tag = ChannelCase::GueGeneral;
      ch.A = (w * t).array().exp().matrix();
      ch.G = MatrixXcd::Zero(d, d);
    } else {
      ch.case_tag = ChannelCase::GoeGeneral;
      fill_goe_pairs(w, lambda, t, ch.A, ch.G);
    }
    const double defect = trace_defect(ch);
    if (!(defect <= opts.trace_tol)) {
      throw NumericalError("trace preservation violated by " + std::to_string(defect) +
                           " at t = " + std::to_string(t) + " (tolerance " +
                           std::to_string(opts.trace_tol) + ")");
    }
    out.push_back(std::move(ch));
  }
  return out;
}

}  // namespace

L1Generator build_L1(const Spectrum& spec, const NoiseModel& model) {
  check_dims(spec, model);
  L1Generator gen;
  gen.ensemble = model.ensemble();
  const VectorXd js = row_sums(model);
  const MatrixXd& lambda = model.lambda();
  if (model.ensemble() == Ensemble::GUE) {
    gen.w = gue_w(spec, js);
    gen.cross = lambda;
    gen.exchange = MatrixXd::Zero(spec.dim(), spec.dim());
  } else {
    gen.w = goe_w(spec, lambda, js);
    gen.cross = 0.5 * lambda;
    gen.exchange = 0.5 * lambda;
  }
  return gen;
}

MatrixXcd apply_generator(const L1Generator& gen, const MatrixXcd& rho) {
  if (rho.rows() != gen.dim() || rho.cols() != gen.dim()) {
    throw DimensionMismatch("operator shape does not match generator dimension");
  }
  MatrixXcd out = gen.w.cwiseProduct(rho);
  out.diagonal() += gen.cross.cast<Complex>() * rho.diagonal();
  out += gen.exchange.cast<Complex>().cwiseProduct(rho.transpose());
  return out;
}

ChannelOne u1_gue_const(const Spectrum& spec, double J, double t) {
  check_time(t);
  if (!(J >= 0.0)) throw InvalidArgument("J must be >= 0");
  const int d = spec.dim();
  ChannelOne ch;
  ch.case_tag = ChannelCase::GueConst;
  ch.time = t;
  const MatrixXcd w = gue_w(spec, VectorXd::Constant(d, J));
  ch.A = (w * t).array().exp().matrix();
  ch.B = MatrixXcd::Constant(d, d, -std::expm1(-J * t) / d);
  ch.G = MatrixXcd::Zero(d, d);
  return ch;
}

ChannelOne u1_goe_const(const Spectrum& spec, double J, double t) {
  check_time(t);
  if (!(J >= 0.0)) throw InvalidArgument("J must be >= 0");
  const int d = spec.dim();
  ChannelOne ch;
  ch.case_tag = ChannelCase::GoeConst;
  ch.time = t;
  const MatrixXd lambda = MatrixXd::Constant(d, d, J / d);
  const MatrixXcd w = goe_w(spec, lambda, VectorXd::Constant(d, J));
  fill_goe_pairs(w, lambda, t, ch.A, ch.G);
  ch.B = MatrixXcd::Constant(d, d, -std::expm1(-0.5 * J * t) / d);
  return ch;
}

ChannelOne u1_gue_general(const Spectrum& spec, const NoiseModel& model, double t,
                          const OdeOptions& opts) {
  if (model.ensemble() != Ensemble::GUE) throw InvalidArgument("u1_gue_general needs GUE noise");
  const double times[] = {t};
  return std::move(general_series(spec, model, times, opts).front());
}

ChannelOne u1_goe_general(const Spectrum& spec, const NoiseModel& model, double t,
                          const OdeOptions& opts) {
  if (model.ensemble() != Ensemble::GOE) throw InvalidArgument("u1_goe_general needs GOE noise");
  const double times[] = {t};
  return std::move(general_series(spec, model, times, opts).front());
}

std::vector<ChannelOne> u1_general_series(const Spectrum& spec, const NoiseModel& model,
                                          std::span<const double> times,
                                          const OdeOptions& opts) {
  return general_series(spec, model, times, opts);
}

ChannelOne averaged_channel(const Spectrum& spec, const NoiseModel& model, double t,
                            const OdeOptions& opts) {
  check_dims(spec, model);
  if (model.is_constant()) {
    const double J = model.constant_J();
    return model.ensemble() == Ensemble::GUE ? u1_gue_const(spec, J, t) : u1_goe_const(spec, J, t);
  }
  return model.ensemble() == Ensemble::GUE ? u1_gue_general(spec, model, t, opts)
                                           : u1_goe_general(spec, model, t, opts);
}

GoeClosedFormParams goe_closed_form_params(const Spectrum& spec, const NoiseModel& model) {
  check_dims(spec, model);
  const MatrixXd& lambda = model.lambda();
  const MatrixXcd w = goe_w(spec, lambda, row_sums(model));
  const int d = spec.dim();
  GoeClosedFormParams p;
  p.g.resize(d, d);
  p.c_plus.resize(d, d);
  p.c_minus.resize(d, d);
  p.z_plus.resize(d, d);
  p.z_minus.resize(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const Complex delta = w(i, j) - w(j, i);
      const Complex s = std::sqrt(delta * delta + lambda(i, j) * lambda(i, j));
      p.g(i, j) = lambda(i, j) / s;
      p.c_plus(i, j) = (s + delta) / s;
      p.c_minus(i, j) = (s - delta) / s;
      p.z_plus(i, j) = 0.5 * (w(i, j) + w(j, i) + s);
      p.z_minus(i, j) = 0.5 * (w(i, j) + w(j, i) - s);
    }
  }
  return p;
}

void goe_coefficients_from_params(const GoeClosedFormParams& p, double t, MatrixXcd& A,
                                  MatrixXcd& G) {
  const MatrixXcd ep = (p.z_plus * t).array().exp().matrix();
  const MatrixXcd em = (p.z_minus * t).array().exp().matrix();
  A = 0.5 * (p.c_minus.cwiseProduct(em) + p.c_plus.cwiseProduct(ep));
  G = 0.5 * p.g.cwiseProduct(ep - em);
}

namespace {

GoeClosedFormParams diagonal_exact_params(int d, double J) {
  GoeClosedFormParams p;
  p.g = MatrixXcd::Ones(d, d);
  p.c_plus = MatrixXcd::Ones(d, d);
  p.c_minus = MatrixXcd::Ones(d, d);
  const double base = -(d + 1) * J / (2.0 * d);
  p.z_plus = MatrixXcd::Constant(d, d, base + J / (2.0 * d));
  p.z_minus = MatrixXcd::Constant(d, d, base - J / (2.0 * d));
  return p;
}

}  // namespace

GoeClosedFormParams goe_params_small_J(const Spectrum& spec, double J) {
  const int d = spec.dim();
  GoeClosedFormParams p = diagonal_exact_params(d, J);
  const VectorXd& e = spec.energies();
  const double base = -(d + 1) * J / (2.0 * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      const double eij = e[i] - e[j];
      const double a = std::abs(eij);
      p.g(i, j) = -1i * J / (2.0 * d * a);
      p.c_plus(i, j) = 1.0 - eij / a;
      p.c_minus(i, j) = 1.0 + eij / a;
      p.z_plus(i, j) = Complex(base, a);
      p.z_minus(i, j) = Complex(base, -a);
    }
  }
  return p;
}

GoeClosedFormParams goe_params_large_J(const Spectrum& spec, double J) {
  const int d = spec.dim();
  GoeClosedFormParams p = diagonal_exact_params(d, J);
  const VectorXd& e = spec.energies();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      const double eij = e[i] - e[j];
      p.g(i, j) = 1.0;
      p.c_plus(i, j) = 1.0 - 2i * (d * eij / J);
      p.c_minus(i, j) = 1.0 + 2i * (d * eij / J);
    }
  }
  return p;
}

MatrixXcd apply_channel(const ChannelOne& ch, const MatrixXcd& rho) {
  check_square(ch, rho);
  MatrixXcd out = ch.A.cwiseProduct(rho);
  out.diagonal() += ch.B * rho.diagonal();
  out += ch.G.cwiseProduct(rho.transpose());
  return out;
}

Complex contract_trace_pair(const ChannelOne& ch, const MatrixXcd& X, const MatrixXcd& Y) {
  check_square(ch, X);
  check_square(ch, Y);
  // identity: X_ij Y_ji A_ij; cross: X_ii Y_ll B_li; exchange: X_ij Y_ij G_ji.
  const Complex id = (X.cwiseProduct(Y.transpose()).cwiseProduct(ch.A)).sum();
  const Complex cross = Y.diagonal().transpose() * ch.B * X.diagonal();
  const Complex ex = (X.cwiseProduct(Y).cwiseProduct(ch.G.transpose())).sum();
  return id + cross + ex;
}

Complex sff_from_channel(const ChannelOne& ch) {
  const double d = ch.dim();
  return (ch.A.sum() + ch.B.trace() + ch.G.trace()) / (d * d);
}

double transfer_from_channel(const ChannelOne& ch, int i, int j) {
  if (i < 0 || j < 0 || i >= ch.dim() || j >= ch.dim()) {
    throw InvalidArgument("transfer indices out of range");
  }
  Complex p = ch.B(j, i);
  if (i == j) p += ch.A(i, i) + ch.G(i, i);
  return p.real();
}

MatrixXcd dense_superoperator(const ChannelOne& ch) {
  const int d = ch.dim();
  MatrixXcd m = MatrixXcd::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      m(i * d + j, i * d + j) += ch.A(i, j);
      m(i * d + j, j * d + i) += ch.G(i, j);
    }
    for (int k = 0; k < d; ++k) m(i * d + i, k * d + k) += ch.B(i, k);
  }
  return m;
}

MatrixXcd dense_generator(const L1Generator& gen) {
  ChannelOne as_channel;
  as_channel.A = gen.w;
  as_channel.B = gen.cross.cast<Complex>();
  as_channel.G = gen.exchange.cast<Complex>();
  return dense_superoperator(as_channel);
}

MatrixXcd choi_matrix(const ChannelOne& ch) {
  const int d = ch.dim();
  const MatrixXcd s = dense_superoperator(ch);
  MatrixXcd c(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int ip = 0; ip < d; ++ip)
        for (int jp = 0; jp < d; ++jp) c(ip * d + i, jp * d + j) = s(i * d + j, ip * d + jp);
  return c;
}

}  // namespace noisechaos
