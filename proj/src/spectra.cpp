#include "noisechaos/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "noisechaos/errors.hpp"

namespace noisechaos {

namespace {

VectorXd sorted_checked(std::vector<double> values) {
  if (values.size() < 2) {
    throw InvalidDimension("spectrum needs at least two levels, got " +
                           std::to_string(values.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("spectrum contains a non-finite level");
  }
  std::sort(values.begin(), values.end());
  return Eigen::Map<const VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

Spectrum::Spectrum(std::vector<double> energies) : offsets_(sorted_checked(std::move(energies))) {
  materialize();
}

Spectrum::Spectrum(const VectorXd& energies)
    : Spectrum(std::vector<double>(energies.data(), energies.data() + energies.size())) {}

Spectrum::Spectrum(VectorXd offsets, double scale, double shift)
    : offsets_(std::move(offsets)), scale_(scale), shift_(shift) {
  materialize();
}

Spectrum Spectrum::affine(const Spectrum& base, double scale, double shift) {
  if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(shift)) {
    throw InvalidArgument("affine spectrum map needs a finite positive scale");
  }
  // Compose with the parent's own affine map; offsets are shared.
  return Spectrum(base.offsets_, scale * base.scale_, shift + scale * base.shift_);
}

void Spectrum::materialize() {
  energies_ = (scale_ * offsets_.array() + shift_).matrix();
  mean_ = energies_.mean();
}

Spectrum sample_gue_spectrum(int dim, Rng& rng) {
  if (dim < 2) throw InvalidDimension("GUE sampling needs dim >= 2");
  std::normal_distribution<double> normal(0.0, 1.0);
  const double diag_sd = std::sqrt(1.0 / dim);
  const double off_sd = std::sqrt(0.5 / dim);
  MatrixXcd h(dim, dim);
  for (int i = 0; i < dim; ++i) {
    h(i, i) = diag_sd * normal(rng);
    for (int j = i + 1; j < dim; ++j) {
      const double re = off_sd * normal(rng);
      const double im = off_sd * normal(rng);
      h(i, j) = Complex(re, im);
      h(j, i) = Complex(re, -im);
    }
  }
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return Spectrum(VectorXd(solver.eigenvalues()));
}

Spectrum sample_goe_spectrum(int dim, Rng& rng) {
  if (dim < 2) throw InvalidDimension("GOE sampling needs dim >= 2");
  std::normal_distribution<double> normal(0.0, 1.0);
  const double diag_sd = std::sqrt(2.0 / dim);
  const double off_sd = std::sqrt(1.0 / dim);
  MatrixXd h(dim, dim);
  for (int i = 0; i < dim; ++i) {
    h(i, i) = diag_sd * normal(rng);
    for (int j = i + 1; j < dim; ++j) {
      h(i, j) = h(j, i) = off_sd * normal(rng);
    }
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  return Spectrum(VectorXd(solver.eigenvalues()));
}

LevelStatistics level_statistics(const Spectrum& spec) {
  const int dim = spec.dim();
  if (dim < 3) throw InvalidDimension("level statistics need dim >= 3");

  // Gaps of the offsets; the affine scale cancels exactly in every ratio.
  const VectorXd& off = spec.offsets();
  std::vector<double> gaps(dim - 1);
  for (int n = 0; n + 1 < dim; ++n) {
    gaps[n] = off[n + 1] - off[n];
    if (gaps[n] == 0.0) throw DegenerateSpectrum(static_cast<std::size_t>(n));
  }

  LevelStatistics out;
  out.spacings.resize(dim - 1);
  for (int n = 0; n + 1 < dim; ++n) out.spacings[n] = spec.scale() * gaps[n];
  out.ratios.resize(dim - 2);
  out.folded_ratios.resize(dim - 2);
  for (int n = 1; n + 1 < dim; ++n) {
    const double r = gaps[n] / gaps[n - 1];
    out.ratios[n - 1] = r;
    out.folded_ratios[n - 1] = std::min(r, 1.0 / r);
  }
  out.mean_folded_ratio = mean_folded_ratio(out, 0, out.folded_ratios.size());
  return out;
}

double mean_folded_ratio(const LevelStatistics& stats, std::size_t first, std::size_t last) {
  last = std::min(last, stats.folded_ratios.size());
  if (first >= last) throw InvalidArgument("empty ratio window");
  const double sum = std::accumulate(stats.folded_ratios.begin() + first,
                                     stats.folded_ratios.begin() + last, 0.0);
  return sum / static_cast<double>(last - first);
}

}  // namespace noisechaos
