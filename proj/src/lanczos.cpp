#include "noisechaos/lanczos.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace noisechaos {

namespace {

using boost::multiprecision::cpp_int;

// S_n = sum_{k<n} (-1)^{n-k+1} binom(2n, 2k) S_k, S_0 = 1.
std::vector<cpp_int> secant_numbers(int n_max) {
  std::vector<cpp_int> s(n_max + 1);
  s[0] = 1;
  for (int n = 1; n <= n_max; ++n) {
    cpp_int sum = 0;
    cpp_int binom = 1;  // binom(2n, 2k), advanced two rows at a time
    for (int k = 0; k < n; ++k) {
      if ((n - k + 1) % 2 == 0) {
        sum += binom * s[k];
      } else {
        sum -= binom * s[k];
      }
      binom = binom * (2 * n - 2 * k) * (2 * n - 2 * k - 1) / ((2 * k + 1) * (2 * k + 2));
    }
    s[n] = sum;
  }
  return s;
}

void check_digits(const LanczosOptions& opts) {
  if (opts.digits < 50) throw InvalidArgument("Lanczos precision must be >= 50 digits");
}

LanczosResult finish(const std::vector<HighPrecision>& re, const std::vector<HighPrecision>& im,
                     const std::vector<HighPrecision>& b2, int n_max) {
  LanczosResult r;
  r.n_max = n_max;
  for (std::size_t k = 0; k < re.size(); ++k) {
    r.moments.emplace_back(re[k].convert_to<double>(), im.empty() ? 0.0 : im[k].convert_to<double>());
  }
  for (const HighPrecision& v : b2) {
    const double mag = sqrt(abs(v)).convert_to<double>();
    r.b_signed.push_back(v < 0 ? -mag : mag);
  }
  return r;
}

}  // namespace

std::vector<HighPrecision> sech_moments(double alpha, int k_max) {
  if (k_max < 0) throw InvalidArgument("k_max must be >= 0");
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  const std::vector<cpp_int> s = secant_numbers(k_max);
  const HighPrecision a2 = HighPrecision(alpha) * HighPrecision(alpha);
  std::vector<HighPrecision> mu(k_max + 1);
  HighPrecision apow = 1;
  for (int k = 0; k <= k_max; ++k) {
    mu[k] = HighPrecision(s[k]) * apow;
    apow *= a2;
  }
  return mu;
}

void noisy_moments_hp(std::span<const HighPrecision> mu_even, double J, double tau, int k_max,
                      std::vector<HighPrecision>& re, std::vector<HighPrecision>& im) {
  if (k_max < 0) throw InvalidArgument("k_max must be >= 0");
  if (mu_even.size() <= static_cast<std::size_t>(k_max / 2)) {
    throw InvalidArgument("not enough even moments for k_max");
  }
  const HighPrecision j(J), t(tau);
  // (iJ)^p = i^p J^p
  std::vector<HighPrecision> jpow(k_max + 1);
  jpow[0] = 1;
  for (int p = 1; p <= k_max; ++p) jpow[p] = jpow[p - 1] * j;
  auto ipow_re = [](int p) { return p % 2 ? 0 : (p % 4 == 0 ? 1 : -1); };
  auto ipow_im = [](int p) { return p % 2 ? (p % 4 == 1 ? 1 : -1) : 0; };

  re.assign(k_max + 1, HighPrecision(0));
  im.assign(k_max + 1, HighPrecision(0));
  std::vector<HighPrecision> binom(k_max + 1, HighPrecision(0));
  binom[0] = 1;
  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) {
      for (int m = k; m > 0; --m) binom[m] += binom[m - 1];
    }
    for (int m = 0; m <= k; m += 2) {
      const HighPrecision term = binom[m] * jpow[k - m] * mu_even[m / 2];
      re[k] += ipow_re(k - m) * term;
      im[k] += ipow_im(k - m) * term;
    }
    if (k == 0) re[k] += t;
    re[k] -= ipow_re(k) * t * jpow[k];
    im[k] -= ipow_im(k) * t * jpow[k];
  }
}

LanczosResult lanczos_from_moments(std::span<const double> mu_even, int n_max,
                                   const LanczosOptions& opts) {
  check_digits(opts);
  PrecisionGuard guard(opts.digits);
  std::vector<HighPrecision> mu(mu_even.begin(), mu_even.end());
  const auto b2 = lanczos_b_squared<HighPrecision>(mu, n_max, opts.breakdown_tol);
  std::vector<HighPrecision> re(2 * mu.size() - 1, HighPrecision(0));
  for (std::size_t k = 0; k < mu.size(); ++k) re[2 * k] = mu[k];
  return finish(re, {}, b2, n_max);
}

LanczosResult lanczos_sech(double alpha, double J, double tau, int n_max,
                           const LanczosOptions& opts) {
  check_digits(opts);
  if (!(J >= 0.0)) throw InvalidArgument("J must be >= 0");
  if (n_max < 1) throw InvalidArgument("n_max must be >= 1");
  PrecisionGuard guard(opts.digits);
  const std::vector<HighPrecision> mu = sech_moments(alpha, n_max);
  std::vector<HighPrecision> re, im;
  noisy_moments_hp(mu, J, tau, 2 * n_max, re, im);
  std::vector<HighPrecision> even(n_max + 1);
  for (int k = 0; k <= n_max; ++k) even[k] = re[2 * k];
  const auto b2 = lanczos_b_squared<HighPrecision>(even, n_max, opts.breakdown_tol);
  return finish(re, im, b2, n_max);
}

}  // namespace noisechaos
