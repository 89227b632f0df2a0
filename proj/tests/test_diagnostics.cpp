#include <doctest.h>

#include <cmath>

#include "noisechaos/diagnostics.hpp"
#include "noisechaos/errors.hpp"
#include "support.hpp"

using namespace noisechaos;
using namespace testing_support;

TEST_CASE("form factor closed forms match the channel contraction") {
  const int D = 6;
  const Spectrum spec = random_spectrum(D, 12);
  Rng rng(4);
  const MatrixXd lam = random_lambda(D, rng, 2.0);
  for (double t : {0.0, 0.3, 1.2, 4.0}) {
    CAPTURE(t);
    CHECK(sff_gue_const_value(spec, 0.9, t) ==
          doctest::Approx(sff_from_channel(u1_gue_const(spec, 0.9, t)).real()).epsilon(1e-10));
    CHECK(sff_goe_const_value(spec, 0.9, t) ==
          doctest::Approx(sff_from_channel(u1_goe_const(spec, 0.9, t)).real()).epsilon(1e-10));
    // general profiles go through the dense channel
    for (Ensemble e : {Ensemble::GUE, Ensemble::GOE}) {
      const NoiseModel m = NoiseModel::matrix(e, lam);
      const MatrixXcd W = replica_channel(spec, m, 1, t);
      Complex tr = 0.0;
      for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) tr += W(i * D + j, i * D + j);
      CHECK(std::abs(sff_from_channel(averaged_channel(spec, m, t)) - tr / double(D * D)) < 1e-9);
    }
  }
}

TEST_CASE("form factor limits") {
  const int D = 10;
  const Spectrum spec = random_spectrum(D, 3);
  const std::vector<double> grid = make_time_grid(0.0, 50.0, 11, GridSpacing::Linear);
  const DiagnosticSeries gue = sff_gue_const(spec, 1.0, grid);
  const DiagnosticSeries goe = sff_goe_const(spec, 1.0, grid);
  CHECK(gue.values.front() == Complex(1.0, 0.0));
  CHECK(goe.values.front().real() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(gue.values.back().real() == doctest::Approx(1.0 / (D * D)).epsilon(1e-6));
  CHECK(goe.values.back().real() == doctest::Approx(1.0 / (D * D)).epsilon(1e-6));
  for (const auto& v : goe.values) CHECK(std::abs(v.imag()) < 1e-12);
  CHECK(gue.name == "sff");
  CHECK(gue.dim == D);

  // J = 0 is the bare phase sum
  for (double t : {0.5, 2.0})
    CHECK(sff_gue_const_value(spec, 0.0, t) ==
          doctest::Approx(std::norm(noiseless_trace(spec, t)) / (D * D)));
}

TEST_CASE("GOE small and large noise expansions") {
  const Spectrum spec(std::vector<double>{-2.5, -1.5, -0.5, 0.5, 1.5, 2.5});
  for (double t : {0.5, 2.0, 10.0}) {
    const double exact = sff_goe_const_value(spec, 1e-3, t);
    CHECK(std::abs(sff_goe_small_J(spec, 1e-3, t) - exact) < 1e-5 * exact);
  }
  const Spectrum narrow(std::vector<double>{-1e-4, -5e-5, 0.0, 2e-5, 6e-5, 1e-4});
  for (double t : {0.1, 1.0, 5.0}) {
    const double exact = sff_goe_const_value(narrow, 50.0, t / 50.0);
    CHECK(sff_goe_large_J(narrow, 50.0, t / 50.0) == doctest::Approx(exact).epsilon(1e-6));
  }
}

TEST_CASE("two-point functions") {
  const int D = 5;
  const Spectrum spec = random_spectrum(D, 9);
  Rng rng(8);
  const MatrixXcd O = random_matrix(D, rng);
  const double J = 0.6;
  for (double t : {0.0, 0.7, 2.2}) {
    CHECK(std::abs(two_point_gue_const_value(spec, J, O, t) -
                   two_point_from_channel(u1_gue_const(spec, J, t), O)) < 1e-12);
    CHECK(std::abs(two_point_goe_const_value(spec, J, O, t) -
                   two_point_from_channel(u1_goe_const(spec, J, t), O)) < 1e-12);
    // Heisenberg picture by hand
    const VectorXcd ph = (Complex(0.0, t) * spec.energies().cast<Complex>()).array().exp().matrix();
    const MatrixXcd Ot = ph.asDiagonal() * O * ph.conjugate().asDiagonal();
    CHECK(std::abs(two_point_noiseless(spec, O, t) - (O.adjoint() * Ot).trace() / double(D)) <
          1e-12);
  }
  CHECK(std::abs(two_point_gue_const_value(spec, J, O, 0.0) -
                 (O.adjoint() * O).trace() / double(D)) < 1e-12);
  const MatrixXcd tl = O - (O.trace() / double(D)) * MatrixXcd::Identity(D, D);
  CHECK(std::abs(two_point_gue_const_value(spec, J, tl, 1.0) -
                 std::exp(-J) * two_point_noiseless(spec, tl, 1.0)) < 1e-13);
  CHECK_THROWS_AS(two_point_gue_const_value(spec, J, MatrixXcd::Zero(2, 2), 1.0),
                  DimensionMismatch);
}

TEST_CASE("noisy moments are the Taylor coefficients of C_J(-it)") {
  const int D = 6;
  const Spectrum spec = random_spectrum(D, 31);
  Rng rng(1);
  const MatrixXcd O = random_hermitian(D, rng, false);
  const double J = 1.3;
  const Complex trO = O.trace(), trOd = O.adjoint().trace();
  const Complex tau = trO * trOd / double(D * D);

  // C_0(-it) = (1/D) sum |O_ji|^2 e^{(E_j - E_i) t}
  auto c0 = [&](Complex z) {
    Complex s = 0.0;
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j) s += std::norm(O(j, i)) * std::exp((spec[j] - spec[i]) * z);
    return s / double(D);
  };
  const int k_max = 10;
  std::vector<double> mu_even(k_max / 2 + 1);
  for (int n = 0; n <= k_max / 2; ++n) {
    double s = 0.0;
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j) s += std::norm(O(j, i)) * std::pow(spec[j] - spec[i], 2 * n);
    mu_even[n] = s / D;
  }
  const auto mu = noisy_moments(mu_even, J, trO, trOd, D, k_max);
  REQUIRE(mu.size() == k_max + 1);

  // trapezoid rule on |z| = 1 for k! [z^k] C_J(-iz)
  const int N = 256;
  double fact = 1.0;
  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) fact *= k;
    Complex s = 0.0;
    for (int n = 0; n < N; ++n) {
      const Complex z = std::polar(1.0, 2.0 * M_PI * n / N);
      const Complex g = std::exp(Complex(0.0, J) * z) * c0(z) +
                        tau * (1.0 - std::exp(Complex(0.0, J) * z));
      s += g * std::pow(z, -k);
    }
    const Complex want = s / double(N) * fact;
    CAPTURE(k);
    CHECK(std::abs(mu[k] - want) < 1e-9 * (1.0 + std::abs(want)));
  }

  // J = 0 leaves the even moments alone
  const auto mu0 = noisy_moments(mu_even, 0.0, trO, trOd, D, k_max);
  for (int k = 0; k <= k_max; ++k)
    CHECK(std::abs(mu0[k] - (k % 2 ? 0.0 : mu_even[k / 2])) < 1e-12);
  CHECK_THROWS_AS(noisy_moments(mu_even, J, trO, trOd, D, k_max + 2), InvalidArgument);
}

TEST_CASE("effective Hamiltonian keeps the spacing ratios") {
  const Spectrum spec = random_spectrum(50, 77);
  const LevelStatistics ref = level_statistics(spec);
  for (double J : {0.1, 1.0, 10.0}) {
    for (double t : {0.1, 1.0, 10.0}) {
      const Spectrum eff = effective_hamiltonian(spec, J, t);
      CHECK(level_statistics(eff).ratios == ref.ratios);
      CHECK(eff.mean() == doctest::Approx(spec.mean()));
    }
  }
  const Spectrum same = effective_hamiltonian(spec, 1.0, 0.0);
  for (int i = 0; i < spec.dim(); ++i) CHECK(same[i] == spec[i]);
}

TEST_CASE("transfer probabilities") {
  const int D = 5;
  const Spectrum spec = random_spectrum(D, 14);
  const std::vector<double> grid = make_time_grid(0.0, 60.0, 13, GridSpacing::Linear);
  const auto gue = transfer_probability(spec, NoiseModel::constant(Ensemble::GUE, D, 1.0), 1, 3,
                                        grid);
  const auto goe = transfer_probability(spec, NoiseModel::constant(Ensemble::GOE, D, 2.0), 1, 3,
                                        grid);
  CHECK(gue.values == goe.values);
  CHECK(gue.values.front() == Complex(0.0, 0.0));
  CHECK(gue.values.back().real() == doctest::Approx(1.0 / D));
  const auto same = transfer_probability(spec, NoiseModel::constant(Ensemble::GUE, D, 1.0), 2,
                                         2, grid);
  CHECK(same.values.front() == Complex(1.0, 0.0));

  // general profiles via the ODE channel, checked against the dense channel
  const NoiseModel g = NoiseModel::gibbs(Ensemble::GOE, spec, 2.0, 0.7);
  const auto gen = transfer_probability(spec, g, 0, 4, grid);
  for (std::size_t k = 0; k < 4; ++k) {
    const MatrixXcd W = replica_channel(spec, g, 1, grid[k]);
    CHECK(gen.values[k].real() == doctest::Approx(W(4 * D + 4, 0).real()).epsilon(1e-8));
    CHECK(gen.values[k].real() >= -1e-12);
    CHECK(gen.values[k].real() <= 1.0 + 1e-12);
  }
  CHECK_THROWS_AS(transfer_probability(spec, g, 0, D, grid), InvalidArgument);
}

TEST_CASE("return probabilities") {
  const double t_s = std::log(50.0);
  const Spectrum big = random_spectrum(100, 1);
  const std::vector<double> one = {t_s};
  CHECK(return_probability(big, 1.0, ProjectorPartition::eigenbasis(100), one).values[0].real() ==
        doctest::Approx(0.0298).epsilon(0.005));

  const int D = 6;
  const Spectrum spec = random_spectrum(D, 2);
  const std::vector<double> grid = make_time_grid(0.0, 8.0, 9, GridSpacing::Linear);
  const auto eig = return_probability(spec, 0.8, ProjectorPartition::eigenbasis(D), grid);
  const auto sff = sff_gue_const(spec, 0.8, grid);
  CHECK(eig.values.front().real() == doctest::Approx(1.0));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(eig.values[k].real() >= sff.values[k].real() - 1e-12);
    const double by_channel = return_probability_from_channel(
        u1_gue_const(spec, 0.8, grid[k]), ProjectorPartition::eigenbasis(D));
    CHECK(eig.values[k].real() == doctest::Approx(by_channel).epsilon(1e-12));
  }

  // block partition against the dense channel: (1/D_S) sum_k E Tr(P_k U^dag P_k U)
  const ProjectorPartition blocks = ProjectorPartition::blocks(D, {{0, 2}, {1}, {3, 4, 5}});
  const auto blk = return_probability(spec, 0.8, blocks, grid);
  const MatrixXcd W = replica_channel(spec, NoiseModel::constant(Ensemble::GUE, D, 0.8), 1, 1.0);
  Complex ref = 0.0;
  for (const MatrixXcd& P : blocks.projectors())
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j)
        for (int k = 0; k < D; ++k)
          for (int l = 0; l < D; ++l) ref += P(i, j) * P(k, l) * W(l * D + k, i * D + j);
  CHECK(blk.values[1].real() == doctest::Approx(ref.real() / D).epsilon(1e-10));
  CHECK(blk.values.front().real() == doctest::Approx(1.0));

  CHECK_THROWS_AS(ProjectorPartition::blocks(D, {{0, 1}, {1, 2, 3, 4, 5}}), InvalidArgument);
  CHECK_THROWS_AS(ProjectorPartition({MatrixXcd::Identity(3, 3), unit(3, 0, 0)}),
                  InvalidArgument);
}
