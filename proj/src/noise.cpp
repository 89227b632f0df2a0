#include "noisechaos/noise.hpp"

#include <cmath>
#include <cstdio>

#include "noisechaos/errors.hpp"

namespace noisechaos {

std::string to_string(Ensemble e) { return e == Ensemble::GUE ? "gue" : "goe"; }

Ensemble ensemble_from_string(const std::string& s) {
  if (s == "gue" || s == "GUE") return Ensemble::GUE;
  if (s == "goe" || s == "GOE") return Ensemble::GOE;
  throw InvalidArgument("unknown ensemble '" + s + "'");
}

namespace {

void check_lambda(const MatrixXd& lambda) {
  if (lambda.rows() != lambda.cols()) throw DimensionMismatch("lambda must be square");
  if (lambda.rows() < 2) throw InvalidDimension("noise model needs dim >= 2");
  for (Eigen::Index i = 0; i < lambda.rows(); ++i) {
    for (Eigen::Index j = 0; j < lambda.cols(); ++j) {
      const double v = lambda(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        throw InvalidArgument("lambda entries must be finite and non-negative");
      }
      if (v != lambda(j, i)) throw InvalidArgument("lambda must be symmetric");
    }
  }
}

void check_strength(double J) {
  if (!std::isfinite(J) || J < 0.0) throw InvalidArgument("noise strength J must be >= 0");
}

}  // namespace

NoiseModel::NoiseModel(Ensemble e, NoiseProfile p, int dim, MatrixXd lambda)
    : ensemble_(e), profile_(std::move(p)), dim_(dim), lambda_(std::move(lambda)) {}

NoiseModel NoiseModel::constant(Ensemble ensemble, int dim, double J) {
  if (dim < 2) throw InvalidDimension("noise model needs dim >= 2");
  check_strength(J);
  MatrixXd lambda = MatrixXd::Constant(dim, dim, J / dim);
  return NoiseModel(ensemble, ConstantProfile{J}, dim, std::move(lambda));
}

NoiseModel NoiseModel::matrix(Ensemble ensemble, MatrixXd lambda) {
  check_lambda(lambda);
  const int dim = static_cast<int>(lambda.rows());
  MatrixXd copy = lambda;
  return NoiseModel(ensemble, MatrixProfile{std::move(lambda)}, dim, std::move(copy));
}

NoiseModel NoiseModel::gibbs(Ensemble ensemble, const Spectrum& spec, double J, double beta) {
  check_strength(J);
  if (!std::isfinite(beta) || beta < 0.0) throw InvalidArgument("beta must be >= 0");
  const int dim = spec.dim();
  const VectorXd& e = spec.energies();
  MatrixXd lambda(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      lambda(i, j) = (J / dim) * std::exp(-beta * std::abs(e[i] - e[j]));
    }
  }
  return NoiseModel(ensemble, GibbsProfile{J, beta, e}, dim, std::move(lambda));
}

double NoiseModel::constant_J() const {
  if (const auto* c = std::get_if<ConstantProfile>(&profile_)) return c->J;
  throw InvalidArgument("noise profile is not constant");
}

NoiseModel NoiseModel::with_strength(double J) const {
  if (is_constant()) return constant(ensemble_, dim_, J);
  if (const auto* g = std::get_if<GibbsProfile>(&profile_)) {
    return gibbs(ensemble_, Spectrum(g->energies), J, g->beta);
  }
  throw InvalidArgument("matrix noise profile has no scalar strength");
}

std::string describe(const NoiseModel& model) {
  char buf[96];
  if (model.is_constant()) {
    std::snprintf(buf, sizeof buf, " const J=%.17g", model.constant_J());
  } else if (const auto* g = std::get_if<GibbsProfile>(&model.profile())) {
    std::snprintf(buf, sizeof buf, " gibbs J=%.17g beta=%.17g", g->J, g->beta);
  } else {
    std::snprintf(buf, sizeof buf, " matrix");
  }
  return to_string(model.ensemble()) + buf;
}

VectorXd row_sums(const NoiseModel& model) { return model.lambda().rowwise().sum(); }

NoiseSampler::NoiseSampler(const NoiseModel& model, double dt)
    : ensemble_(model.ensemble()), dt_(dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidStep("time step must be positive");
  const MatrixXd& lambda = model.lambda();
  const int d = model.dim();
  sd_.resize(d, d);
  for (int i = 0; i < d; ++i) {
    sd_(i, i) = std::sqrt(lambda(i, i) / dt);
    for (int j = i + 1; j < d; ++j) {
      sd_(i, j) = sd_(j, i) = std::sqrt(lambda(i, j) / (2.0 * dt));
    }
  }
}

void NoiseSampler::sample(Rng& rng, MatrixXcd& out) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::Index d = sd_.rows();
  out.resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    out(i, i) = sd_(i, i) * normal(rng);
    for (Eigen::Index j = i + 1; j < d; ++j) {
      if (ensemble_ == Ensemble::GUE) {
        const double re = sd_(i, j) * normal(rng);
        const double im = sd_(i, j) * normal(rng);
        out(i, j) = Complex(re, im);
        out(j, i) = Complex(re, -im);
      } else {
        out(i, j) = out(j, i) = sd_(i, j) * normal(rng);
      }
    }
  }
}

MatrixXcd sample_noise_matrix(const NoiseModel& model, double dt, Rng& rng) {
  MatrixXcd out;
  NoiseSampler(model, dt).sample(rng, out);
  return out;
}

}  // namespace noisechaos
