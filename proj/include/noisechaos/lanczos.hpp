#pragma once

#include <cmath>
#include <span>
#include <vector>

#include <boost/multiprecision/mpfr.hpp>

#include "noisechaos/errors.hpp"
#include "noisechaos/types.hpp"

namespace noisechaos {

using HighPrecision = boost::multiprecision::mpfr_float;

/// Sets the default mpfr precision (decimal digits) for its lifetime.
class PrecisionGuard {
public:
  explicit PrecisionGuard(unsigned digits) : saved_(HighPrecision::default_precision()) {
    HighPrecision::default_precision(digits);
  }
  ~PrecisionGuard() { HighPrecision::default_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

private:
  unsigned saved_;
};

struct LanczosOptions {
  unsigned digits = 120;        ///< working precision, at least 50
  double breakdown_tol = 1e-14;  ///< |M^{(n)}_{2n}| below this stops the recursion
};

struct LanczosResult {
  std::vector<Complex> moments;  ///< mu_k (or mu_{J;k}), k = 0..2 n_max
  std::vector<double> b_signed;  ///< sgn(b_n^2) |b_n|, n = 1..n_max
  std::vector<double> a;         ///< unused, always empty
  int n_max = 0;
};

/// b_n^2 = M^{(n)}_{2n}, n = 1..n_max, from the even moments mu_even[k] = mu_{2k}
/// (mu_0 = 1) via
///   M^{(0)}_{2k} = mu_{2k},  M^{(-1)} = 0,  b_{-1} = b_0 = 1,
///   M^{(m)}_{2k} = M^{(m-1)}_{2k} / b_{m-1}^2 - M^{(m-2)}_{2k-2} / b_{m-2}^2.
/// b_n^2 may come out negative for non-positive moment sequences and is
/// returned with its sign. Throws LanczosBreakdown(n) when |b_n^2| < breakdown_tol.
template <class Real>
std::vector<Real> lanczos_b_squared(std::span<const Real> mu_even, int n_max,
                                    double breakdown_tol = 1e-14) {
  if (n_max < 1) throw InvalidArgument("n_max must be >= 1");
  if (mu_even.size() < static_cast<std::size_t>(n_max) + 1) {
    throw InvalidArgument("need even moments mu_0..mu_{2 n_max}");
  }
  using std::abs;
  if (abs(mu_even[0] - Real(1)) > Real(1e-12)) {
    throw PreconditionError("moments must be normalized, mu_0 = 1");
  }
  const std::size_t K = n_max + 1;
  std::vector<Real> prev2(K, Real(0));  // M^{(m-2)}
  std::vector<Real> prev1(mu_even.begin(), mu_even.begin() + K);  // M^{(m-1)}
  Real b2_prev2 = 1, b2_prev1 = 1;
  std::vector<Real> out;
  out.reserve(n_max);
  for (int m = 1; m <= n_max; ++m) {
    std::vector<Real> cur(K, Real(0));
    for (std::size_t k = m; k < K; ++k) cur[k] = prev1[k] / b2_prev1 - prev2[k - 1] / b2_prev2;
    const Real b2 = cur[m];
    if (abs(b2) < Real(breakdown_tol)) throw LanczosBreakdown(m);
    out.push_back(b2);
    prev2 = std::move(prev1);
    prev1 = std::move(cur);
    b2_prev2 = b2_prev1;
    b2_prev1 = b2;
  }
  return out;
}

/// Even moments of sech(alpha t): mu_{2k} = alpha^{2k} S_k with S_k the secant
/// numbers (1, 1, 5, 61, 1385, ...), computed exactly then rounded to the
/// current precision. k = 0..k_max.
std::vector<HighPrecision> sech_moments(double alpha, int k_max);

/// Real and imaginary parts of mu_{J;k}, k = 0..k_max, from even moments, with
/// tau = Tr O Tr O^dagger / D^2:
///   mu_{J;k} = sum_{m even} binom(k, m) (iJ)^{k-m} mu_m + tau (delta_{k0} - (iJ)^k).
/// Even k are real, odd k imaginary.
void noisy_moments_hp(std::span<const HighPrecision> mu_even, double J, double tau, int k_max,
                      std::vector<HighPrecision>& re, std::vector<HighPrecision>& im);

/// Runs the recursion in extended precision on double input moments.
LanczosResult lanczos_from_moments(std::span<const double> mu_even, int n_max,
                                   const LanczosOptions& opts = {});

/// C(t) = sech(alpha t) dressed by constant GUE noise,
///   C_J(t) = e^{-Jt} C(t) + tau (1 - e^{-Jt}),
/// with the recursion run on the even moments of C_J(-it). J = 0 gives the
/// noiseless coefficients b_n = alpha n.
LanczosResult lanczos_sech(double alpha, double J, double tau, int n_max,
                           const LanczosOptions& opts = {});

}  // namespace noisechaos
