#include "whembed/halfplane.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace whembed::halfplane {

namespace {

const cplx kSqrtI = std::exp(cplx(0.0, 0.25 * kPi));

}  // namespace

cplx V_minus(cplx z, const MediumConfig& m) { return kI * kSqrtI / std::sqrt(m.k() - z); }

cplx V_plus(cplx z, const MediumConfig& m) { return -kSqrtI * std::sqrt(m.k() + z); }

cplx kernel(cplx z, const MediumConfig& m) { return 1.0 / (kI * gamma_branch(z, m)); }

cplx HalfPlaneSolution::S1(double theta) const { return edge_green_directivity(theta, medium); }

HalfPlaneSolution make_solution(const MediumConfig& m) {
  m.validate();
  HalfPlaneSolution s;
  s.medium = m;
  s.V_minus = {[m](cplx z) { return V_minus(z, m); }, HalfPlane::lower, -0.5};
  s.V_plus = {[m](cplx z) { return V_plus(z, m); }, HalfPlane::upper, 0.5};
  return s;
}

cplx edge_green_directivity(double theta, const MediumConfig& m) {
  return kI * V_plus(-m.k() * std::cos(theta), m);
}

cplx directivity(double theta, double theta_i, const MediumConfig& m) {
  const double c = std::cos(theta) + std::cos(theta_i);
  if (std::abs(c) <= 1e-10)
    throw Error(ErrorCode::optical_boundary, "reflected-ray direction theta = pi - theta_i");
  return edge_green_directivity(theta, m) * edge_green_directivity(theta_i, m) / (m.k() * c);
}

NormalFamily normal_family(const MediumConfig& m) {
  NormalFamily f;
  f.size = 1;
  f.X_minus = [m](cplx z) { return CMatrix::Constant(1, 1, V_minus(z, m)); };
  f.X_plus = [m](cplx z) { return CMatrix::Constant(1, 1, V_plus(z, m)); };
  f.det_reference = [m](cplx z) { return V_minus(z, m); };
  return f;
}

MatrixWHProblem wh_problem(const MediumConfig& m, double theta_i, cplx residue) {
  MatrixWHProblem p;
  p.size = 1;
  p.kernel = [m](cplx z) { return CMatrix::Constant(1, 1, kernel(z, m)); };
  p.forcing_pole = m.k() * std::cos(theta_i);
  p.forcing_residue = CVector::Constant(1, residue);
  p.growth_minus = {-1.0};
  p.growth_plus = {-0.5};
  return p;
}

AlgebraicNormalizer normalizer(const MediumConfig& m) {
  AlgebraicNormalizer n;
  const cplx k = m.k();
  n.n_minus = [k](cplx z) { return std::sqrt(k + kI * z); };
  n.n_plus = [k](cplx z) { return -std::sqrt(k - kI * z); };
  n.remainder_decay = 2.0;
  return n;
}

cplx closed_form_U_plus(cplx z, cplx z_i, const MediumConfig& m, cplx residue) {
  return -residue * V_plus(z, m) / (V_minus(z_i, m) * (z - z_i));
}

std::vector<cplx> upper_half_plane_points(const MediumConfig& m, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-3.0, 3.0), uy(0.05, 3.0);
  std::vector<cplx> pts;
  for (int j = 0; j < count; ++j) {
    const double x = ux(rng);
    pts.emplace_back(m.k_real * x, m.k_real * uy(rng));
  }
  return pts;
}

std::vector<cplx> strip_points(const MediumConfig& m, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-3.0, 3.0), uy(-0.5, 0.5);
  std::vector<cplx> pts;
  for (int j = 0; j < count; ++j) {
    const double x = ux(rng);
    pts.emplace_back(m.k_real * x, m.k_loss * uy(rng));
  }
  return pts;
}

EmbeddingReport numeric_wh_check(const MediumConfig& m, const ContourSpec& contour, const NumericCheckOptions& opt) {
  m.validate();
  if (!(opt.theta_i > 0.5 * kPi && opt.theta_i < kPi))
    throw Error(ErrorCode::invalid_argument, "numeric check needs theta_i in (pi/2, pi) so that Im z_i < 0");
  EmbeddingReport rep;
  rep.name = "numeric_wh";
  if (std::abs(m.k_loss - 1e-3 * m.k_real) > 1e-12 * m.k_real)
    rep.note("k_loss differs from the default 1e-3*k_real used for the numeric solve");

  const MatrixWHProblem problem = wh_problem(m, opt.theta_i, opt.residue);
  const ScalarWHSolution sol = solve_scalar_wh_numeric(problem, contour, normalizer(m));
  const PoleEmbedding closed = embed_pole_solution(normal_family(m), problem.forcing_pole, problem.forcing_residue);

  double err = 0.0;
  for (cplx z : upper_half_plane_points(m, opt.points, opt.seed)) {
    const cplx a = sol.U_plus(z);
    const cplx b = closed(z)(0);
    err = std::max(err, std::abs(b) > 0.0 ? std::abs(a - b) / std::abs(b) : std::abs(a));
  }
  rep.check("max_relative_error", err, opt.tolerance);

  double worst = 0.0;
  for (cplx z : strip_points(m, opt.points, opt.seed + 1)) {
    const cplx up = sol.U_plus(z), um = sol.U_minus(z);
    const cplx kup = kernel(z, m) * up;
    const cplx f = problem.forcing(z)(0);
    const double res = std::abs(um - kup - f);
    const double scale = std::abs(f) + std::abs(kup);
    const double bound = 10.0 * sol.error_estimate(z) * scale + 1e-14 * scale;
    worst = std::max(worst, bound > 0.0 ? res / bound : (res > 0.0 ? 1e300 : 0.0));
  }
  rep.check("wh_residual_over_10x_error_estimate", worst, 1.0);

  const auto bp = contour.breakpoints();
  rep.metric("nodes", contour.nodes);
  rep.metric("panels", static_cast<double>(bp.size() - 1));
  rep.metric("nodes_per_panel", contour.nodes_per_panel());
  rep.metric("truncation", contour.truncation);
  rep.metric("theta_i", opt.theta_i);
  rep.metric("k_loss", m.k_loss);
  return rep;
}

EmbeddingReport numeric_wh_convergence(const MediumConfig& m, const ContourSpec& contour,
                                       const NumericCheckOptions& opt) {
  ContourSpec coarse = contour;
  coarse.nodes = contour.nodes / 2;
  NumericCheckOptions o = opt;
  o.tolerance = 1.0;
  const double e_coarse = numeric_wh_check(m, coarse, o).find("max_relative_error")->value;
  const double e_fine = numeric_wh_check(m, contour, o).find("max_relative_error")->value;
  EmbeddingReport rep;
  rep.name = "numeric_wh_convergence";
  rep.metric("error_at_half_nodes", e_coarse);
  rep.metric("error_at_nodes", e_fine);
  const double ratio = e_fine > 0.0 ? e_coarse / e_fine : std::numeric_limits<double>::infinity();
  rep.metric("reduction_factor", ratio);
  rep.check("inverse_reduction_factor", 1.0 / ratio, 0.25 + 1e-15);
  return rep;
}

EmbeddingReport plane_wave_normal_demo(const MediumConfig& m, cplx z1, const std::vector<cplx>& targets,
                                       const DemoOptions& opt) {
  m.validate();
  if (!(z1.imag() < 0.0)) throw Error(ErrorCode::invalid_argument, "z1 must lie below the contour");
  EmbeddingReport rep;
  rep.name = "plane_wave_normal_demo";
  const NormalFamily fam = normal_family(m);
  const CVector r = CVector::Constant(1, opt.residue);
  const PoleEmbedding base = embed_pole_solution(fam, z1, r);
  const CVector c1 = fam.X_minus(z1).fullPivLu().solve(r);

  // X_p^+ = (z - z1) U^+(z, z1); X_p^- - r = (z - z1) U^-(z, z1) - r.
  auto xp_plus = base.numerator;
  auto xm_fam = fam.X_minus;
  auto xp_minus_less_r = [xm_fam, c1](cplx z) -> CMatrix { return -(xm_fam(z) * c1); };

  NormalFamily pw;
  pw.size = 1;
  pw.X_plus = [xp_plus](cplx z) -> CMatrix { return xp_plus(z); };
  pw.X_minus = xp_minus_less_r;
  pw.det_reference = [xp_minus_less_r](cplx z) { return xp_minus_less_r(z)(0, 0); };

  const std::vector<cplx> pts = upper_half_plane_points(m, opt.points, opt.seed);
  cplx ratio0 = 0.0;
  double ratio_dev = 0.0;
  for (cplx z : pts) {
    const cplx x = xp_plus(z)(0);
    if (!(std::abs(x) >= 1e-13)) throw Error(ErrorCode::degenerate_base, "|X_p^+| < 1e-13 inside the upper half-plane");
    const cplx ratio = x / V_plus(z, m);
    if (ratio0 == 0.0) ratio0 = ratio;
    ratio_dev = std::max(ratio_dev, std::abs(ratio / ratio0 - 1.0));
  }
  rep.check("xp_over_vplus_constancy", ratio_dev, opt.tolerance);
  const cplx expected = -opt.residue / V_minus(z1, m);
  rep.check("xp_over_vplus_value", std::abs(ratio0 - expected) / std::abs(expected), opt.tolerance);
  rep.calibration("xp_over_vplus", ratio0, "X_p^+(z)/V^+(z) at the first test point; closed form -r/V^-(z1)");

  std::vector<double> grid;
  for (int j = 0; j < 200; ++j) {
    const double x = -4.0 + 8.0 * (j + 0.5) / 200.0;
    if (std::abs(std::abs(x) - 1.0) >= 0.05) grid.push_back(m.k_real * x);
  }
  const MatrixWHProblem problem = wh_problem(m, kPi / 2.0, opt.residue);
  EmbeddingReport normal = verify_normal(pw, problem, grid);
  rep.check("plane_wave_family_relation", normal.find("relation_residual")->value, opt.tolerance);

  double dev = 0.0;
  for (cplx zi : targets) {
    if (!(zi.imag() < 0.0)) throw Error(ErrorCode::invalid_argument, "target z_i must lie below the contour");
    const PoleEmbedding via_pw = embed_pole_solution(pw, zi, r);
    const PoleEmbedding direct = embed_pole_solution(fam, zi, r);
    for (cplx z : pts) {
      const cplx a = via_pw(z)(0), b = direct(z)(0);
      dev = std::max(dev, std::abs(b) > 0.0 ? std::abs(a - b) / std::abs(b) : std::abs(a));
    }
  }
  rep.check("max_deviation_from_closed_form", dev, opt.tolerance);
  rep.metric("targets", static_cast<double>(targets.size()));
  rep.metric("points", static_cast<double>(pts.size()));
  return rep;
}

}  // namespace whembed::halfplane
