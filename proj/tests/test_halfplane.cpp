#include <doctest.h>

#include <cmath>

#include "whembed/halfplane.hpp"
#include "whembed/oracles.hpp"
#include "whembed/suites.hpp"

using namespace whembed;
using namespace whembed::halfplane;

TEST_CASE("edge directivity values") {
  const MediumConfig m{1.0, 0.0};
  CHECK(std::abs(edge_green_directivity(0.0, m)) == 0.0);
  CHECK(std::abs(edge_green_directivity(kPi, m) + std::pow(kI, 1.5) * std::sqrt(2.0)) < 1e-14);
  const HalfPlaneSolution s = make_solution(m);
  CHECK(s.S1(1.2) == edge_green_directivity(1.2, m));
  CHECK(s.V_plus.half_plane == HalfPlane::upper);
  CHECK(s.V_minus.half_plane == HalfPlane::lower);
}

TEST_CASE("directivity, frozen value and oracle ratio") {
  const MediumConfig m{1.0, 0.0};
  CHECK(std::abs(directivity(0.4, 2.2, m) - cplx(0.0, -1.06480415830469583)) < 1e-14);
  CHECK(std::abs(directivity(0.5 * kPi, 0.75 * kPi, m) / oracles::sommerfeld_halfplane(0.5 * kPi, 0.75 * kPi) - 1.0) <
        1e-14);
  CHECK_THROWS_WITH_AS(directivity(1.0, kPi - 1.0, m), doctest::Contains("OpticalBoundary"), Error);
}

TEST_CASE("directivity does not depend on k") {
  const MediumConfig m1{1.0, 0.0}, m3{3.0, 0.0};
  CHECK(std::abs(directivity(0.7, 1.9, m3) - directivity(0.7, 1.9, m1)) < 1e-14);
}

TEST_CASE("spectral identities") {
  const EmbeddingReport rep = suites::halfplane_identities(1e-12);
  for (const auto& c : rep.checks) {
    INFO(c.name << " = " << c.value);
    CHECK(c.passed);
  }
}

TEST_CASE("V+ and V- are analytic on their half-planes") {
  const MediumConfig m = MediumConfig::numeric_solve(1.0);
  const ContourSpec c = ContourSpec::for_medium(m, 40.0, 2000);
  SpectralFunction up{[m](cplx z) { return V_plus(z, m) / ((z + 2.0 * kI) * (z + 3.0 * kI)); }, HalfPlane::upper, -1.5};
  SpectralFunction low{[m](cplx z) { return V_minus(z, m) / (z - 2.0 * kI); }, HalfPlane::lower, -1.5};
  CHECK(analyticity_defect(up, upper_half_plane_points(m, 10, 3), Side::plus, c) < 1e-6);
  std::vector<cplx> below;
  for (cplx z : upper_half_plane_points(m, 10, 4)) below.push_back(std::conj(z));
  CHECK(analyticity_defect(low, below, Side::minus, c) < 1e-6);
}

TEST_CASE("growth exponents of V+ and V-") {
  const MediumConfig m{1.0, 0.0};
  const double r1 = 1e4, r2 = 1e5;
  for (double arg : {0.3, 1.5, 2.8}) {
    const cplx z1 = r1 * std::exp(kI * arg), z2 = r2 * std::exp(kI * arg);
    const double slope = std::log(std::abs(V_plus(z2, m)) / std::abs(V_plus(z1, m))) / std::log(r2 / r1);
    CHECK(slope == doctest::Approx(0.5).epsilon(0.05));
    const double slope_m = std::log(std::abs(V_minus(std::conj(z2), m)) / std::abs(V_minus(std::conj(z1), m))) /
                           std::log(r2 / r1);
    CHECK(slope_m == doctest::Approx(-0.5).epsilon(0.05));
  }
}

TEST_CASE("numeric scalar WH matches the closed form") {
  const MediumConfig m = MediumConfig::numeric_solve(1.0);
  const ContourSpec c = ContourSpec::for_medium(m, 40.0, 2000);
  NumericCheckOptions o;
  o.points = 20;
  const EmbeddingReport rep = numeric_wh_check(m, c, o);
  REQUIRE(rep.find("max_relative_error") != nullptr);
  CHECK(rep.find("max_relative_error")->value < 1e-6);
  CHECK(rep.passed());
}

TEST_CASE("numeric scalar WH with zero forcing is zero") {
  const MediumConfig m = MediumConfig::numeric_solve(1.0);
  const ContourSpec c = ContourSpec::for_medium(m, 40.0, 1000);
  const ScalarWHSolution sol = solve_scalar_wh_numeric(wh_problem(m, 0.75 * kPi, 0.0), c, normalizer(m));
  for (cplx z : upper_half_plane_points(m, 5, 9)) CHECK(std::abs(sol.U_plus(z)) == 0.0);
}

TEST_CASE("numeric solve rejects a forcing pole above the contour") {
  const MediumConfig m = MediumConfig::numeric_solve(1.0);
  const ContourSpec c = ContourSpec::for_medium(m, 40.0, 1000);
  CHECK_THROWS_AS(solve_scalar_wh_numeric(wh_problem(m, 0.25 * kPi), c, normalizer(m)), Error);
  CHECK_THROWS_AS(numeric_wh_check(m, c, {0.25 * kPi}), Error);
}

TEST_CASE("closed-form U+ has residue -r/K(z_i) at the forcing pole") {
  const MediumConfig m = MediumConfig::identity_checks(1.0);
  const cplx zi = m.k() * std::cos(2.3);
  const cplx h = 1e-7;
  const cplx res = closed_form_U_plus(zi + h, zi, m) * h;
  CHECK(std::abs(res + kI / kernel(zi, m)) < 1e-6);
}

TEST_CASE("plane-wave normal demo") {
  const MediumConfig m = MediumConfig::identity_checks(1.0);
  const cplx z1 = m.k() * std::cos(0.7 * kPi);
  const std::vector<cplx> targets{m.k() * std::cos(0.6 * kPi), m.k() * std::cos(0.85 * kPi)};
  const EmbeddingReport rep = plane_wave_normal_demo(m, z1, targets);
  CHECK(rep.passed());
  CHECK_THROWS_AS(plane_wave_normal_demo(m, cplx(0.1, 0.5), targets), Error);
}

TEST_CASE("oracle and demo suites at their tolerances") {
  CHECK(suites::halfplane_oracle({60, 1e-12}).passed());
  CHECK(suites::halfplane_demo(1e-12).passed());
}
