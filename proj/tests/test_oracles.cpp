#include <doctest.h>

#include "whembed/oracles.hpp"

using namespace whembed;
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

TEST_CASE("sommerfeld coefficient, frozen values") {
  CHECK(std::abs(oracles::sommerfeld_halfplane(kPi / 2, 0.75 * kPi) - cplx(0.0, 1.84775906502257351)) < 1e-15);
  CHECK(std::abs(oracles::sommerfeld_halfplane(0.4, 2.2) - cplx(0.0, -1.06480415830469583)) < 1e-15);
  CHECK_THROWS_WITH_AS(oracles::sommerfeld_halfplane(1.0, kPi - 1.0), doctest::Contains("OpticalBoundary"), Error);
  CHECK_THROWS_AS(oracles::sommerfeld_halfplane(0.2, 0.2 + kPi), Error);
}

TEST_CASE("sommerfeld coefficient is reciprocal and vanishes on the screen") {
  for (double t = 0.1; t < 3.0; t += 0.37)
    for (double ti = 0.05; ti < 3.0; ti += 0.41) {
      if (std::abs(t + ti - kPi) < 1e-3) continue;
      CHECK(std::abs(oracles::sommerfeld_halfplane(t, ti) - oracles::sommerfeld_halfplane(ti, t)) < 1e-12);
    }
  CHECK(std::abs(oracles::sommerfeld_halfplane(0.0, 1.3)) < 1e-15);
}

TEST_CASE("GTD wedge coefficient, frozen value and face zeros") {
  CHECK(std::abs(oracles::gtd_wedge(1.0, 2.0) - 6.43626348180761121) < 1e-13);
  CHECK(std::abs(oracles::gtd_wedge(0.0, 1.1)) < 1e-14);
  CHECK(std::abs(oracles::gtd_wedge(1.5 * kPi, 1.1)) < 1e-13);
  CHECK_THROWS_AS(oracles::gtd_wedge(1.0, kPi - 1.0), Error);
}

TEST_CASE("calibrate") {
  CMatrix ref(10, 12);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 12; ++j) ref(i, j) = cplx(1.0 + i, 0.5 * j - 2.0);
  const Mask all = Mask::Constant(10, 12, true);

  SUBCASE("identical grids") {
    const auto r = oracles::calibrate(ref, ref, all, "all");
    CHECK(std::abs(r.constant - 1.0) < 1e-15);
    CHECK(r.max_ratio_deviation < 1e-15);
    CHECK(r.sample_count == 120);
    CHECK(r.mask == "all");
  }
  SUBCASE("scaled by 2i") {
    const auto r = oracles::calibrate(ref, cplx(0.0, 2.0) * ref, all);
    CHECK(std::abs(r.constant - cplx(0.0, 2.0)) < 1e-14);
    CHECK(r.max_ratio_deviation < 1e-14);
  }
  SUBCASE("masked outlier is ignored") {
    CMatrix cand = ref;
    cand(3, 4) *= 5.0;
    Mask m = all;
    m(3, 4) = false;
    const auto r = oracles::calibrate(ref, cand, m);
    CHECK(r.sample_count == 119);
    CHECK(r.max_ratio_deviation < 1e-15);
    const auto unmasked = oracles::calibrate(ref, cand, all);
    CHECK(unmasked.max_ratio_deviation > 1.0);
  }
  SUBCASE("too few samples") {
    CHECK_THROWS_WITH_AS(oracles::calibrate(ref, ref, Mask::Constant(10, 12, false)), doctest::Contains("EmptyMask"),
                         Error);
    CHECK_NOTHROW(oracles::calibrate(ref, ref, all, "", 120));
    CHECK_THROWS_AS(oracles::calibrate(ref, ref, all, "", 121), Error);
  }
  SUBCASE("misaligned grids") {
    CHECK_THROWS_AS(oracles::calibrate(ref, CMatrix::Ones(3, 3), all), Error);
  }
}
