#include <doctest.h>

#include <cmath>

#include "noisechaos/errors.hpp"
#include "noisechaos/spectra.hpp"

using namespace noisechaos;

TEST_CASE("spectrum sorts and validates levels") {
  Spectrum s(std::vector<double>{3.0, -1.0, 2.0});
  CHECK(s.dim() == 3);
  CHECK(s[0] == -1.0);
  CHECK(s[2] == 3.0);
  CHECK(s.mean() == doctest::Approx(4.0 / 3.0));

  CHECK_THROWS_AS(Spectrum(std::vector<double>{1.0}), InvalidDimension);
  CHECK_THROWS_AS(Spectrum(std::vector<double>{1.0, NAN}), InvalidArgument);
}

TEST_CASE("affine images share offsets and compose") {
  Spectrum s(std::vector<double>{0.0, 1.0, 3.0});
  Spectrum a = Spectrum::affine(s, 0.5, 2.0);
  CHECK(a[1] == doctest::Approx(2.5));
  Spectrum b = Spectrum::affine(a, 2.0, -4.0);
  for (int i = 0; i < 3; ++i) CHECK(b[i] == doctest::Approx(s[i]));
  CHECK(b.offsets() == s.offsets());
  CHECK_THROWS_AS(Spectrum::affine(s, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("level statistics") {
  Spectrum s(std::vector<double>{0.0, 1.0, 3.0, 4.0});
  const LevelStatistics st = level_statistics(s);
  REQUIRE(st.spacings.size() == 3);
  REQUIRE(st.ratios.size() == 2);
  CHECK(st.ratios[0] == doctest::Approx(2.0));
  CHECK(st.ratios[1] == doctest::Approx(0.5));
  CHECK(st.folded_ratios[0] == doctest::Approx(0.5));
  CHECK(st.mean_folded_ratio == doctest::Approx(0.5));

  CHECK_THROWS_AS(level_statistics(Spectrum(std::vector<double>{0.0, 1.0})), InvalidDimension);
  try {
    level_statistics(Spectrum(std::vector<double>{0.0, 1.0, 1.0, 2.0}));
    FAIL("expected DegenerateSpectrum");
  } catch (const DegenerateSpectrum& e) {
    CHECK(e.index() == 1);
  }
}

TEST_CASE("sampled spectra follow the semicircle and the r statistics") {
  Rng rng(7);
  double r_gue = 0.0, r_goe = 0.0, edge = 0.0;
  const int reps = 40, D = 200;
  for (int k = 0; k < reps; ++k) {
    const Spectrum g = sample_gue_spectrum(D, rng);
    const Spectrum o = sample_goe_spectrum(D, rng);
    edge += g[D - 1] / reps;
    r_gue += mean_folded_ratio(level_statistics(g), D / 4, 3 * D / 4) / reps;
    r_goe += mean_folded_ratio(level_statistics(o), D / 4, 3 * D / 4) / reps;
  }
  // semicircle edge at 2, mean folded ratio ~0.603 (GUE) and ~0.531 (GOE)
  CHECK(edge == doctest::Approx(2.0).epsilon(0.05));
  CHECK(r_gue == doctest::Approx(0.603).epsilon(0.03));
  CHECK(r_goe == doctest::Approx(0.531).epsilon(0.03));
}
