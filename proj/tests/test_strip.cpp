#include <doctest.h>

#include <cmath>

#include "whembed/halfplane.hpp"
#include "whembed/strip.hpp"

using namespace whembed;
using namespace whembed::strip;

namespace {

constexpr double kDeg = kPi / 180.0;

const BieOperator& op10() {
  static const BieOperator op(StripConfig::from_ka(10.0), 40);
  return op;
}

}  // namespace

TEST_CASE("WH data") {
  const StripConfig cfg{1.5, {2.0, 0.0}};
  const EmbeddingReport rep = wh_data_checks(cfg, 100, 5);
  for (const auto& c : rep.checks) {
    INFO(c.name << " = " << c.value);
    CHECK(c.passed);
  }
  const StripWHData d = assemble_wh(cfg);
  CHECK(std::abs(d.kernel(0.0)(0, 1) - 1.0 / (kI * 2.0)) < 1e-15);
  CHECK(d.kernel(cplx(0.3, 0.1))(1, 0) == cplx(0.0));
  CHECK(d.problem(1.0).size == 2);
  CHECK(std::abs(d.forcing_pole(1.0) - 2.0 * std::cos(1.0)) < 1e-15);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS((StripConfig{0.0, {1.0, 0.0}}).validate(), Error);
  CHECK_THROWS_AS(BieOperator(StripConfig::from_ka(10.0), 27), Error);
  CHECK_NOTHROW(BieOperator(StripConfig::from_ka(10.0), 28));
  CHECK_THROWS_AS(BieOperator(StripConfig{1.0, {1.0, 1e-3}}, 20), Error);
  CHECK_THROWS_AS(BieOperator(StripConfig::from_ka(0.05), 20), Error);
  CHECK(default_modes(10.0) == 40);
  CHECK(default_modes(30.0) == 80);
}

TEST_CASE("frozen directivities from an independent prototype") {
  const DensitySolution d1 = bie_solve(StripConfig::from_ka(1.0), 0.25 * kPi, 40);
  CHECK(std::abs(directivity_from_density(d1, 0.5 * kPi) - cplx(1.7558485115291687, 0.9092324697098637)) < 1e-9);
  const DensitySolution d10 = op10().solve(2.0 * kPi / 3.0);
  CHECK(std::abs(directivity_from_density(d10, kPi / 3.0) - cplx(17.314761094638044, 1.1433462263555807)) < 1e-8);
}

TEST_CASE("boundary residual and NotConverged") {
  const DensitySolution d = op10().solve(1.1);
  CHECK(d.boundary_residual < 1e-10);
  CHECK(d.coefficients.size() == 40);
  CHECK(op10().boundary_residual(d.coefficients, 1.1) == doctest::Approx(d.boundary_residual));
  CHECK_THROWS_WITH_AS(op10().solve(1.1, 1e-30), doctest::Contains("NotConverged"), Error);
}

TEST_CASE("reciprocity and optical theorem") {
  const std::vector<double> a = interior_angles(12);
  CHECK(a.front() == doctest::Approx(5.0 * kDeg));
  CHECK(a.back() == doctest::Approx(175.0 * kDeg));
  const DirectivityGrid g = directivity_grid(op10(), a, a, 2);
  CHECK(reciprocity_defect(g) < 1e-8);
  for (double ti : {0.3, 1.2, 2.5}) CHECK(optical_theorem_defect(op10().solve(ti)) < 1e-6);
}

TEST_CASE("mirror symmetry at normal incidence") {
  const DensitySolution d = op10().solve(0.5 * kPi);
  double worst = 0.0, smax = 0.0;
  for (int j = 1; j < 90; ++j) {
    const double t = j * kPi / 90.0;
    const cplx s = directivity_from_density(d, t);
    smax = std::max(smax, std::abs(s));
    worst = std::max(worst, std::abs(std::abs(s) - std::abs(directivity_from_density(d, kPi - t))));
  }
  CHECK(worst / smax < 1e-8);
}

TEST_CASE("grid evaluation is independent of thread count") {
  const std::vector<double> a = interior_angles(7);
  const DirectivityGrid g1 = directivity_grid(op10(), a, a, 1);
  const DirectivityGrid g4 = directivity_grid(op10(), a, a, 4);
  CHECK((g1.S - g4.S).cwiseAbs().maxCoeff() == 0.0);
  CHECK(g1.k == 10.0);
}

TEST_CASE("rank-2 property") {
  const std::vector<double> a = interior_angles(48);
  SUBCASE("ka = 10") {
    const EmbeddingReport rep = rank2_embedding_check(directivity_grid(op10(), a, a));
    CHECK(rep.find("sigma3_over_sigma1")->value < 1e-5);
    CHECK(rep.find("F_symmetry")->value < 1e-8);
  }
  SUBCASE("ka = 0.1") {
    const BieOperator op(StripConfig::from_ka(0.1), 20);
    const EmbeddingReport rep = rank2_embedding_check(directivity_grid(op, a, a));
    CHECK(rep.find("sigma3_over_sigma1")->value < 1e-5);
    CHECK(rep.passed());
  }
}

TEST_CASE("edge directivities") {
  const std::vector<double> a = interior_angles(48);
  const DirectivityGrid g = directivity_grid(op10(), a, a);
  const CMatrix F = g.weighted();
  const EdgeDirectivities e = extract_edge_directivities(F, a, 10.0);
  CHECK(e.reflection_residual < 1e-4);
  CHECK(e.reconstruction_residual < 1e-8);
  CHECK((e.sigma == 1 || e.sigma == -1));
  const CMatrix R = e.s2 * e.s2.transpose() - e.s1 * e.s1.transpose();
  const CVector m1 = -e.s1, m2 = -e.s2;
  const CMatrix Rflip = m2 * m2.transpose() - m1 * m1.transpose();
  CHECK((R - Rflip).cwiseAbs().maxCoeff() == 0.0);
  CHECK((F - R).cwiseAbs().maxCoeff() / F.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("edge directivities: non-rank-2 input is gauge-ambiguous") {
  const std::vector<double> a = interior_angles(32);
  CMatrix F = CMatrix::Zero(32, 32);
  for (int i = 0; i < 32; ++i) F(i, i) = 1.0 + i;
  CHECK_THROWS_AS(extract_edge_directivities(F, a, 10.0), Error);
}

TEST_CASE("plane-wave embedding") {
  SUBCASE("ka = 10, 60/120 -> 75 deg") {
    const EmbeddingReport rep = plane_wave_embed(60 * kDeg, 120 * kDeg, 75 * kDeg, op10());
    CHECK(rep.find("masked_relative_error")->value < 1e-5);
    CHECK(rep.passed());
  }
  SUBCASE("target equal to the first base angle") {
    const EmbeddingReport rep = plane_wave_embed(60 * kDeg, 120 * kDeg, 60 * kDeg, op10());
    CHECK(std::abs(rep.calibrations[0].value - 1.0) < 1e-12);
    CHECK(std::abs(rep.calibrations[1].value) < 1e-12);
    CHECK(rep.find("masked_relative_error")->value < 1e-12);
  }
  SUBCASE("repeated base angle") {
    CHECK_THROWS_WITH_AS(plane_wave_embed(60 * kDeg, 60 * kDeg, 75 * kDeg, op10()),
                         doctest::Contains("SingularMatrix"), Error);
  }
}

TEST_CASE("embedding error is bounded by the BIE residual") {
  // The smallest admissible mode count already resolves ka = 10 to rounding level,
  // so the study checks the bound rather than a decay rate.
  for (int modes : {28, 30, 32, 36, 44}) {
    const BieOperator op(StripConfig::from_ka(10.0), modes);
    const EmbeddingReport rep = plane_wave_embed(60 * kDeg, 120 * kDeg, 75 * kDeg, op);
    const double residual = rep.metric_value("max_boundary_residual");
    const double error = rep.metric_value("masked_error_over_max_S");
    INFO("modes " << modes << ": residual " << residual << ", error " << error);
    CHECK(residual < 1e-10);
    CHECK(error < 1e3 * residual + 1e-13);
  }
}

TEST_CASE("far-field constant matches the two-edge half-plane asymptotics") {
  const EmbeddingReport rep = edge_asymptotic_calibration(20.0, 60, 16);
  REQUIRE(!rep.calibrations.empty());
  CHECK(std::abs(rep.calibrations[0].value - 1.0) < 1e-3);
}

TEST_CASE("figure 3 grid") {
  const DirectivityGrid g = figure3_grid(10.0, 36);
  CHECK(g.theta.size() == 36);
  CHECK(g.theta_i.size() == 2);
  CHECK(g.theta_i[0] == doctest::Approx(0.25 * kPi));
  CHECK(g.theta_i[1] == doctest::Approx(0.5 * kPi));
  CHECK(g.theta[0] == doctest::Approx(2.5 * kDeg));
}
