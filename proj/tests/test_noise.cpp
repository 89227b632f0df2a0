#include <doctest.h>

#include <cmath>

#include "noisechaos/errors.hpp"
#include "noisechaos/noise.hpp"

using namespace noisechaos;

TEST_CASE("noise profiles") {
  const NoiseModel c = NoiseModel::constant(Ensemble::GUE, 4, 2.0);
  CHECK(c.is_constant());
  CHECK(c.constant_J() == 2.0);
  CHECK(c.lambda()(1, 3) == 0.5);
  CHECK(row_sums(c)[2] == doctest::Approx(2.0));
  CHECK(describe(c) == "gue const J=2");
  CHECK(c.with_strength(1.0).lambda()(0, 0) == 0.25);

  Spectrum s(std::vector<double>{0.0, 1.0, 3.0});
  const NoiseModel g = NoiseModel::gibbs(Ensemble::GOE, s, 3.0, 0.5);
  CHECK(g.lambda()(0, 2) == doctest::Approx(std::exp(-1.5)));
  CHECK(g.lambda()(1, 1) == doctest::Approx(1.0));
  CHECK_THROWS_AS(g.constant_J(), InvalidArgument);
  CHECK(g.with_strength(6.0).lambda()(0, 2) == doctest::Approx(2.0 * std::exp(-1.5)));

  MatrixXd bad(2, 2);
  bad << 1.0, 0.5, 0.4, 1.0;
  CHECK_THROWS_AS(NoiseModel::matrix(Ensemble::GUE, bad), InvalidArgument);
  bad(1, 0) = -0.5;
  bad(0, 1) = -0.5;
  CHECK_THROWS_AS(NoiseModel::matrix(Ensemble::GUE, bad), InvalidArgument);
  CHECK_THROWS_AS(NoiseModel::constant(Ensemble::GUE, 1, 1.0), InvalidDimension);
  CHECK_THROWS_AS(NoiseModel::constant(Ensemble::GUE, 3, -1.0), InvalidArgument);
  CHECK(ensemble_from_string("goe") == Ensemble::GOE);
  CHECK_THROWS_AS(ensemble_from_string("gse"), InvalidArgument);
}

TEST_CASE("sampled noise is Hermitian with the regularized covariance") {
  const int D = 3;
  const double dt = 0.01;
  MatrixXd lambda(D, D);
  lambda << 0.9, 0.3, 0.6, 0.3, 0.2, 0.4, 0.6, 0.4, 0.5;
  CHECK_THROWS_AS(NoiseSampler(NoiseModel::matrix(Ensemble::GUE, lambda), 0.0), InvalidStep);

  for (Ensemble e : {Ensemble::GUE, Ensemble::GOE}) {
    const NoiseModel m = NoiseModel::matrix(e, lambda);
    const NoiseSampler sampler(m, dt);
    Rng rng(11);
    MatrixXcd eta(D, D);
    // accumulate E[eta_ij eta_ji] and E[eta_ij eta_ij]
    MatrixXcd cross = MatrixXcd::Zero(D, D), same = MatrixXcd::Zero(D, D);
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
      sampler.sample(rng, eta);
      REQUIRE((eta - eta.adjoint()).cwiseAbs().maxCoeff() == 0.0);
      cross += eta.cwiseProduct(eta.transpose());
      same += eta.cwiseProduct(eta);
    }
    cross *= dt / n;
    same *= dt / n;
    for (int i = 0; i < D; ++i) {
      for (int j = 0; j < D; ++j) {
        // GUE: lambda_ij d_il d_jk; GOE: lambda_ij (d_ik d_jl + d_il d_jk) / 2
        const double want_cross = e == Ensemble::GUE || i == j ? lambda(i, j) : lambda(i, j) / 2;
        const double want_same = i == j ? lambda(i, i) : (e == Ensemble::GUE ? 0.0 : lambda(i, j) / 2);
        CHECK(cross(i, j).real() == doctest::Approx(want_cross).epsilon(0.02).scale(1.0));
        CHECK(std::abs(same(i, j) - want_same) < 0.01);
      }
    }
  }
}
