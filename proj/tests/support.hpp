#pragma once

// Independent reference implementations used by the tests. Nothing here is
// shared with the library code paths it checks.

#include <vector>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "noisechaos/noise.hpp"
#include "noisechaos/spectra.hpp"
#include "noisechaos/types.hpp"

namespace testing_support {

using namespace noisechaos;

inline Spectrum random_spectrum(int D, std::uint64_t seed, Ensemble e = Ensemble::GUE) {
  Rng rng = substream(seed, 0);
  return e == Ensemble::GUE ? sample_gue_spectrum(D, rng) : sample_goe_spectrum(D, rng);
}

inline MatrixXcd random_matrix(int D, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  MatrixXcd m(D, D);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

inline MatrixXcd random_hermitian(int D, Rng& rng, bool traceless) {
  MatrixXcd m = random_matrix(D, rng);
  MatrixXcd h = 0.5 * (m + m.adjoint());
  if (traceless) h -= (h.trace() / double(D)) * MatrixXcd::Identity(D, D);
  return h;
}

inline MatrixXd random_lambda(int D, Rng& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(0.0, scale);
  MatrixXd l(D, D);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j <= i; ++j) l(i, j) = l(j, i) = u(rng) / D;
  return l;
}

inline MatrixXcd unit(int D, int i, int j) {
  MatrixXcd m = MatrixXcd::Zero(D, D);
  m(i, j) = 1.0;
  return m;
}

// Kronecker product of per-factor operators (identity where none is given).
inline MatrixXcd kron_chain(const std::vector<MatrixXcd>& factors) {
  MatrixXcd out = factors.front();
  for (std::size_t c = 1; c < factors.size(); ++c) {
    MatrixXcd next = Eigen::kroneckerProduct(out, factors[c]).eval();
    out.swap(next);
  }
  return out;
}

// Generator of E[U (x) U* (x) ... ] over k replica pairs, built from the
// stochastic model directly: drift -i H0 on U factors, +i H0 on U* factors,
// plus (1/2) E[(sum_c xi_c)^2] with xi_c = -i eta on U factors and
// +i eta^* = +i eta^T on U* factors.
inline MatrixXcd replica_generator(const Spectrum& spec, const NoiseModel& model, int k) {
  const int D = spec.dim();
  const int n = 2 * k;
  const MatrixXcd I = MatrixXcd::Identity(D, D);
  const MatrixXcd H0 = spec.energies().cast<Complex>().asDiagonal();
  const MatrixXd& lam = model.lambda();

  auto xi = [&](int c, int i, int j) -> MatrixXcd {
    return c % 2 == 0 ? MatrixXcd(Complex(0, -1) * unit(D, i, j))
                      : MatrixXcd(Complex(0, 1) * unit(D, j, i));
  };
  // covariance pairs: E[eta_ij eta_kl] = weight
  struct Pair {
    int i, j, k, l;
    double w;
  };
  std::vector<Pair> cov;
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) {
      if (model.ensemble() == Ensemble::GUE) {
        cov.push_back({i, j, j, i, lam(i, j)});
      } else {
        cov.push_back({i, j, i, j, 0.5 * lam(i, j)});
        cov.push_back({i, j, j, i, 0.5 * lam(i, j)});
      }
    }
  }

  long dim = 1;
  for (int c = 0; c < n; ++c) dim *= D;
  MatrixXcd G = MatrixXcd::Zero(dim, dim);
  for (int c = 0; c < n; ++c) {
    MatrixXcd local = (c % 2 == 0 ? Complex(0, -1) : Complex(0, 1)) * H0;
    for (const Pair& p : cov) local += 0.5 * p.w * xi(c, p.i, p.j) * xi(c, p.k, p.l);
    std::vector<MatrixXcd> f(n, I);
    f[c] = local;
    G += kron_chain(f);
  }
  for (int c = 0; c < n; ++c) {
    for (int c2 = c + 1; c2 < n; ++c2) {
      for (const Pair& p : cov) {
        if (p.w == 0.0) continue;
        std::vector<MatrixXcd> f(n, I);
        // both orderings of the cross term, each with weight 1/2
        f[c] = xi(c, p.i, p.j);
        f[c2] = xi(c2, p.k, p.l);
        G += 0.5 * p.w * kron_chain(f);
        f[c] = xi(c, p.k, p.l);
        f[c2] = xi(c2, p.i, p.j);
        G += 0.5 * p.w * kron_chain(f);
      }
    }
  }
  return G;
}

inline MatrixXcd replica_channel(const Spectrum& spec, const NoiseModel& model, int k, double t) {
  return (replica_generator(spec, model, k) * t).exp();
}

// E[Tr U Tr U^dag Tr U Tr U^dag] from the dense two-replica channel.
inline double dense_sff_fourth(const MatrixXcd& W, int D) {
  Complex s = 0.0;
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      for (int k = 0; k < D; ++k)
        for (int l = 0; l < D; ++l) {
          const long idx = ((long(i) * D + j) * D + k) * D + l;
          s += W(idx, idx);
        }
  return s.real();
}

// (1/D) E Tr(A B_t A B_t), B_t = U^dag B U, from the dense two-replica channel:
// X_ij X_kl = sum conj(U_ai) B_ab U_bj conj(U_ck) B_cd U_dl.
inline Complex dense_otoc(const MatrixXcd& W, int D, const MatrixXcd& A, const MatrixXcd& B) {
  auto id = [D](int a, int b, int c, int d) { return ((long(a) * D + b) * D + c) * D + d; };
  Complex s = 0.0;
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      for (int k = 0; k < D; ++k)
        for (int l = 0; l < D; ++l) {
          const Complex aa = A(j, k) * A(l, i);
          if (aa == 0.0) continue;
          for (int a = 0; a < D; ++a)
            for (int b = 0; b < D; ++b)
              for (int c = 0; c < D; ++c)
                for (int d = 0; d < D; ++d) {
                  s += aa * B(a, b) * B(c, d) * W(id(b, a, d, c), id(j, i, l, k));
                }
        }
  return s / double(D);
}

}  // namespace testing_support
