#pragma once

#include <cstdint>
#include <vector>

#include "whembed/numerics.hpp"
#include "whembed/report.hpp"
#include "whembed/wh_core.hpp"

namespace whembed::halfplane {

// V^-(z) = i sqrt(i)/sqrt(k - z), V^+(z) = -sqrt(i) sqrt(k + z).
cplx V_minus(cplx z, const MediumConfig& m);
cplx V_plus(cplx z, const MediumConfig& m);
// 1/(i gamma(z)); V^- = K V^+.
cplx kernel(cplx z, const MediumConfig& m);

struct HalfPlaneSolution {
  MediumConfig medium;
  SpectralFunction V_minus;
  SpectralFunction V_plus;

  cplx S1(double theta) const;
};

HalfPlaneSolution make_solution(const MediumConfig& m);

// S1(theta) = i V^+(-k cos theta).
cplx edge_green_directivity(double theta, const MediumConfig& m);
// S1(theta) S1(theta_i) / (k cos theta + k cos theta_i); throws OpticalBoundary
// when |cos theta + cos theta_i| <= 1e-10.
cplx directivity(double theta, double theta_i, const MediumConfig& m);

NormalFamily normal_family(const MediumConfig& m);
MatrixWHProblem wh_problem(const MediumConfig& m, double theta_i, cplx residue = kI);
// n^-(z) = sqrt(k + i z), n^+(z) = -sqrt(k - i z); K n^- n^+ -> 1.
AlgebraicNormalizer normalizer(const MediumConfig& m);
// Closed-form U^+(z) = -r V^+(z) / (V^-(z_i) (z - z_i)).
cplx closed_form_U_plus(cplx z, cplx z_i, const MediumConfig& m, cplx residue = kI);

std::vector<cplx> upper_half_plane_points(const MediumConfig& m, int count, std::uint64_t seed);
std::vector<cplx> strip_points(const MediumConfig& m, int count, std::uint64_t seed);

struct NumericCheckOptions {
  double theta_i = 0.75 * kPi;
  cplx residue = kI;
  int points = 50;
  std::uint64_t seed = 7;
  double tolerance = 1e-6;
};

EmbeddingReport numeric_wh_check(const MediumConfig& m, const ContourSpec& contour,
                                 const NumericCheckOptions& opt = {});
// Errors at contour.nodes/2 and contour.nodes; passes if the ratio is >= 4.
EmbeddingReport numeric_wh_convergence(const MediumConfig& m, const ContourSpec& contour,
                                       const NumericCheckOptions& opt = {});

struct DemoOptions {
  cplx residue = kI;
  int points = 50;
  std::uint64_t seed = 11;
  double tolerance = 1e-12;
};

EmbeddingReport plane_wave_normal_demo(const MediumConfig& m, cplx z1, const std::vector<cplx>& targets,
                                       const DemoOptions& opt = {});

}  // namespace whembed::halfplane
