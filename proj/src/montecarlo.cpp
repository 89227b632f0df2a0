#include "noisechaos/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <unsupported/Eigen/MatrixFunctions>

#include "noisechaos/errors.hpp"

namespace noisechaos {

void validate(const TrajectoryConfig& cfg, const NoiseModel& model) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw InvalidStep("dt must be positive");
  const double lmax = model.lambda().maxCoeff();
  if (cfg.dt * lmax * model.dim() > 1.0) {
    throw InvalidStep("dt * max(lambda) * D exceeds 1; reduce dt");
  }
  if (cfg.n_traj < 2) throw InvalidArgument("n_traj must be >= 2");
  if (cfg.threads < 1) throw InvalidArgument("threads must be >= 1");
}

EnsembleEstimate estimate_from_samples(std::span<const Complex> samples) {
  EnsembleEstimate e;
  e.n = static_cast<int>(samples.size());
  if (e.n == 0) return e;
  Complex sum = 0.0;
  for (const Complex& x : samples) sum += x;
  e.mean = sum / static_cast<double>(e.n);
  if (e.n < 2) return e;
  double ss = 0.0;
  for (const Complex& x : samples) ss += std::norm(x - e.mean);
  e.std_err = std::sqrt(ss / (e.n - 1)) / std::sqrt(static_cast<double>(e.n));
  return e;
}

namespace {

// N is the compile-time dimension, or Eigen::Dynamic.
template <int N>
std::vector<MatrixXcd> evolve_fixed(const Spectrum& spec, const NoiseModel& model,
                                    const TrajectoryConfig& cfg, std::span<const double> t_grid,
                                    Rng& rng) {
  using Mat = Eigen::Matrix<Complex, N, N>;
  const int d = spec.dim();
  const NoiseSampler sampler(model, cfg.dt);
  const VectorXcd h0 = spec.energies().cast<Complex>();

  std::vector<MatrixXcd> out;
  out.reserve(t_grid.size());
  Mat U = Mat::Identity(d, d);
  Mat X(d, d), step(d, d), tmp(d, d);
  MatrixXcd eta(d, d);
  double t = 0.0;
  for (double target : t_grid) {
    if (target < t) throw InvalidArgument("time grid must be ascending and >= 0");
    const double span = target - t;
    if (span > 0.0) {
      const long n_sub = std::max(1L, static_cast<long>(std::ceil(span / cfg.dt - 1e-9)));
      const double h = span / n_sub;
      const double rescale = std::sqrt(cfg.dt / h);
      for (long s = 0; s < n_sub; ++s) {
        sampler.sample(rng, eta);
        // X = -i (H0 + eta) h
        X = Complex(0.0, -h * rescale) * eta;
        X.diagonal() += Complex(0.0, -h) * h0;
        step = X.exp();
        tmp.noalias() = step.lazyProduct(U);
        U = tmp;
      }
      t = target;
    }
    const double drift = (U.adjoint() * U - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
    if (drift > cfg.unitarity_tol) {
      throw NumericalError("unitarity drift " + std::to_string(drift) + " at t = " +
                           std::to_string(t));
    }
    out.emplace_back(U);
  }
  return out;
}

}  // namespace

std::vector<MatrixXcd> evolve_trajectory(const Spectrum& spec, const NoiseModel& model,
                                         const TrajectoryConfig& cfg,
                                         std::span<const double> t_grid, Rng& rng) {
  if (model.dim() != spec.dim()) throw DimensionMismatch("noise model and spectrum dims differ");
  validate(cfg, model);
  switch (spec.dim()) {
    case 2: return evolve_fixed<2>(spec, model, cfg, t_grid, rng);
    case 3: return evolve_fixed<3>(spec, model, cfg, t_grid, rng);
    case 4: return evolve_fixed<4>(spec, model, cfg, t_grid, rng);
    case 5: return evolve_fixed<5>(spec, model, cfg, t_grid, rng);
    case 6: return evolve_fixed<6>(spec, model, cfg, t_grid, rng);
    case 8: return evolve_fixed<8>(spec, model, cfg, t_grid, rng);
    default: return evolve_fixed<Eigen::Dynamic>(spec, model, cfg, t_grid, rng);
  }
}

std::vector<DiagnosticSeries> estimate_observables(const Spectrum& spec, const NoiseModel& model,
                                                   const TrajectoryConfig& cfg,
                                                   std::span<const double> t_grid,
                                                   const std::vector<NamedObservable>& obs) {
  validate(cfg, model);
  const std::size_t n_t = t_grid.size();
  const std::size_t n_obs = obs.size();
  const int n = cfg.n_traj;
  // samples[(o * n_t + k) * n + traj]
  std::vector<Complex> samples(n_obs * n_t * static_cast<std::size_t>(n));

  auto run_range = [&](int begin, int end) {
    for (int traj = begin; traj < end; ++traj) {
      Rng rng = substream(cfg.seed, static_cast<std::uint64_t>(traj));
      const std::vector<MatrixXcd> us = evolve_trajectory(spec, model, cfg, t_grid, rng);
      for (std::size_t o = 0; o < n_obs; ++o) {
        for (std::size_t k = 0; k < n_t; ++k) {
          samples[(o * n_t + k) * n + traj] = obs[o].f(us[k], t_grid[k]);
        }
      }
    }
  };

  const int n_threads = std::min(cfg.threads, n);
  if (n_threads == 1) {
    run_range(0, n);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(n_threads);
    const int chunk = (n + n_threads - 1) / n_threads;
    for (int w = 0; w < n_threads; ++w) {
      const int begin = w * chunk;
      const int end = std::min(n, begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        try {
          run_range(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<DiagnosticSeries> out;
  for (std::size_t o = 0; o < n_obs; ++o) {
    DiagnosticSeries s;
    s.name = obs[o].name;
    s.times.assign(t_grid.begin(), t_grid.end());
    s.stderrs.emplace();
    for (std::size_t k = 0; k < n_t; ++k) {
      const EnsembleEstimate e =
          estimate_from_samples(std::span<const Complex>(&samples[(o * n_t + k) * n], n));
      s.values.push_back(e.mean);
      s.stderrs->push_back(e.std_err);
    }
    s.spectrum_hash = spectrum_hash(spec);
    s.noise = describe(model);
    s.dim = spec.dim();
    s.seed = cfg.seed;
    s.extra = {{"dt", cfg.dt}, {"n_traj", cfg.n_traj}};
    s.validate();
    out.push_back(std::move(s));
  }
  return out;
}

NamedObservable sff_observable(int D) {
  const double d2 = static_cast<double>(D) * D;
  return {"sff", [d2](const MatrixXcd& U, double) { return Complex(std::norm(U.trace()) / d2); }};
}

NamedObservable sff_squared_mc_observable() {
  return {"sff_squared", [](const MatrixXcd& U, double) {
            const double k = std::norm(U.trace());
            return Complex(k * k);
          }};
}

NamedObservable two_point_mc_observable(const MatrixXcd& O) {
  const MatrixXcd od = O.adjoint();
  return {"two_point", [O, od](const MatrixXcd& U, double) {
            const MatrixXcd ot = U.adjoint() * O * U;
            return od.cwiseProduct(ot.transpose()).sum() / static_cast<double>(O.rows());
          }};
}

NamedObservable otoc_mc_observable(const MatrixXcd& A, const MatrixXcd& B) {
  return {"otoc", [A, B](const MatrixXcd& U, double) {
            const MatrixXcd abt = A * (U.adjoint() * B * U);
            return abt.cwiseProduct(abt.transpose()).sum() / static_cast<double>(A.rows());
          }};
}

NamedObservable transfer_mc_observable(int i, int j) {
  return {"transfer", [i, j](const MatrixXcd& U, double) { return Complex(std::norm(U(j, i))); }};
}

namespace {

DiagnosticSeries estimate_one(const Spectrum& spec, const NoiseModel& model,
                              const TrajectoryConfig& cfg, std::span<const double> t_grid,
                              NamedObservable obs) {
  return std::move(estimate_observables(spec, model, cfg, t_grid, {std::move(obs)}).front());
}

void check_square(const MatrixXcd& M, int d) {
  if (M.rows() != d || M.cols() != d) throw DimensionMismatch("operator must be D x D");
}

}  // namespace

DiagnosticSeries estimate_sff(const Spectrum& spec, const NoiseModel& model,
                              const TrajectoryConfig& cfg, std::span<const double> t_grid) {
  return estimate_one(spec, model, cfg, t_grid, sff_observable(spec.dim()));
}

DiagnosticSeries estimate_two_point(const Spectrum& spec, const NoiseModel& model,
                                    const TrajectoryConfig& cfg, const MatrixXcd& O,
                                    std::span<const double> t_grid) {
  check_square(O, spec.dim());
  return estimate_one(spec, model, cfg, t_grid, two_point_mc_observable(O));
}

DiagnosticSeries estimate_otoc(const Spectrum& spec, const NoiseModel& model,
                               const TrajectoryConfig& cfg, const MatrixXcd& A,
                               const MatrixXcd& B, std::span<const double> t_grid) {
  check_square(A, spec.dim());
  check_square(B, spec.dim());
  return estimate_one(spec, model, cfg, t_grid, otoc_mc_observable(A, B));
}

DiagnosticSeries estimate_transfer(const Spectrum& spec, const NoiseModel& model,
                                   const TrajectoryConfig& cfg, int i, int j,
                                   std::span<const double> t_grid) {
  if (i < 0 || j < 0 || i >= spec.dim() || j >= spec.dim()) {
    throw InvalidArgument("transfer indices out of range");
  }
  DiagnosticSeries s = estimate_one(spec, model, cfg, t_grid, transfer_mc_observable(i, j));
  s.extra["i"] = i;
  s.extra["j"] = j;
  return s;
}

DiagnosticSeries estimate_sff_squared(const Spectrum& spec, const NoiseModel& model,
                                      const TrajectoryConfig& cfg, std::span<const double> t_grid) {
  return estimate_one(spec, model, cfg, t_grid, sff_squared_mc_observable());
}

}  // namespace noisechaos
