#include "whembed/wh_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace whembed {

namespace {

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

EmbeddingReport verify_normal(const NormalFamily& family, const MatrixWHProblem& problem,
                              const std::vector<double>& grid, NormalTolerances tol) {
  EmbeddingReport rep;
  rep.name = "verify_normal";
  double relation = 0.0, det_minus = 0.0, det_plus = 0.0, factorization = 0.0;
  double det_min = std::numeric_limits<double>::infinity(), det_max = 0.0;
  for (double x : grid) {
    const cplx t(x, 0.0);
    const CMatrix K = problem.kernel(t);
    const CMatrix Xm = family.X_minus(t);
    const CMatrix Xp = family.X_plus(t);
    const CMatrix KXp = K * Xp;
    const double scale = std::max({max_abs(Xm), max_abs(KXp), 1e-300});
    relation = std::max(relation, max_abs(Xm - KXp) / scale);

    const cplx dm = Xm.determinant();
    const cplx dp = Xp.determinant();
    const cplx ref = family.det_reference(t);
    const cplx ref_plus = ref / K.determinant();
    det_minus = std::max(det_minus, std::abs(dm - ref) / std::max(std::abs(ref), 1e-300));
    det_plus = std::max(det_plus, std::abs(dp - ref_plus) / std::max(std::abs(ref_plus), 1e-300));
    det_min = std::min(det_min, std::abs(dm));
    det_max = std::max(det_max, std::abs(dm));

    const CMatrix fac = Xm * Xp.inverse();
    factorization = std::max(factorization, max_abs(K - fac) / std::max(max_abs(K), 1e-300));
  }
  rep.check("relation_residual", relation, tol.relation);
  rep.check("det_minus_residual", det_minus, tol.determinant);
  rep.check("det_plus_residual", det_plus, tol.determinant);
  rep.check("factorization_residual", factorization, tol.factorization);
  rep.metric("det_minus_min_abs", det_min);
  rep.metric("det_minus_max_abs", det_max);
  rep.metric("grid_points", static_cast<double>(grid.size()));
  return rep;
}

VectorSpectralFunction PoleEmbedding::as_function(std::vector<double> growth) const {
  auto num = numerator;
  const cplx zp = pole;
  return {[num, zp](cplx z) -> CVector { return num(z) / (z - zp); }, HalfPlane::upper, std::move(growth)};
}

PoleEmbedding embed_pole_solution(const NormalFamily& family, cplx z_i, const CVector& r) {
  const CMatrix Xm = family.X_minus(z_i);
  if (Xm.rows() != r.size()) throw Error(ErrorCode::invalid_argument, "embed_pole_solution: size mismatch");
  const cplx det = Xm.determinant();
  if (!(std::abs(det) >= 1e-13))
    throw Error(ErrorCode::singular_at_incidence, "det X^-(z_i) = " + std::to_string(std::abs(det)));
  const CVector c = Xm.fullPivLu().solve(r);
  auto Xp = family.X_plus;
  PoleEmbedding out;
  out.pole = z_i;
  out.numerator = [Xp, c](cplx z) -> CVector { return -(Xp(z) * c); };
  return out;
}

ScalarWHSolution solve_scalar_wh_numeric(const MatrixWHProblem& problem, const ContourSpec& contour,
                                         const AlgebraicNormalizer& normalizer) {
  if (problem.size != 1 || problem.forcing_residue.size() != 1)
    throw Error(ErrorCode::invalid_argument, "solve_scalar_wh_numeric needs a 1x1 problem");
  contour.validate();
  const cplx zi = problem.forcing_pole;
  if (!(contour.truncation > 4.0 * std::abs(zi)))
    throw Error(ErrorCode::invalid_argument, "contour truncation must exceed 4|z_i|");
  if (!(zi.imag() < -contour.indentation))
    throw Error(ErrorCode::invalid_argument, "forcing pole must lie below the contour");

  auto kernel = problem.kernel;
  auto n_minus = normalizer.n_minus;
  auto n_plus = normalizer.n_plus;
  auto L = [kernel, n_minus, n_plus](cplx t) { return kernel(t)(0, 0) * n_minus(t) * n_plus(t); };

  // Sample the contour: kernel zeros and winding of L.
  const double h0 = -contour.indentation;
  const std::vector<double> bp = contour.breakpoints();
  std::vector<double> gx, gw;
  gauss_legendre(contour.nodes_per_panel(), gx, gw);
  std::vector<double> args;
  double unwrapped = 0.0, prev = 0.0;
  bool first = true;
  auto visit = [&](double x) {
    const cplx t(x, h0);
    const cplx K = kernel(t)(0, 0);
    if (!(std::abs(K) >= 1e-12))
      throw Error(ErrorCode::kernel_zero, "|K| < 1e-12 at t = " + std::to_string(x));
    const double a = std::arg(L(t));
    if (!first) {
      double d = a - prev;
      while (d > kPi) d -= 2.0 * kPi;
      while (d < -kPi) d += 2.0 * kPi;
      unwrapped += d;
    }
    first = false;
    prev = a;
    args.push_back(a);
  };
  for (size_t i = 0; i + 1 < bp.size(); ++i) {
    visit(bp[i]);
    const double h = 0.5 * (bp[i + 1] - bp[i]), c = 0.5 * (bp[i + 1] + bp[i]);
    for (double g : gx) visit(c + h * g);
  }
  visit(bp.back());
  const double winding = unwrapped / (2.0 * kPi);
  if (std::abs(winding) > 0.5)
    throw Error(ErrorCode::winding_nonzero, "argument of K*n winds " + std::to_string(winding) + " times");

  std::sort(args.begin(), args.end());
  double gap = args.front() + 2.0 * kPi - args.back();
  double cut = args.back() + 0.5 * gap;
  for (size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i + 1] - args[i] > gap) {
      gap = args[i + 1] - args[i];
      cut = args[i] + 0.5 * gap;
    }
  }
  if (gap < 1e-3) throw Error(ErrorCode::winding_nonzero, "argument of K*n covers the full circle");
  const double phi = cut - kPi;
  const cplx rot = std::exp(cplx(0.0, -phi));
  auto raw_log = [L, rot, phi](cplx t) { return std::log(L(t) * rot) + cplx(0.0, phi); };
  const double T = contour.truncation;
  const double n_hi = std::round(raw_log(cplx(T, h0)).imag() / (2.0 * kPi));
  const double n_lo = std::round(raw_log(cplx(-T, h0)).imag() / (2.0 * kPi));
  if (n_hi != n_lo) throw Error(ErrorCode::winding_nonzero, "log(K*n) has different limits at +-T");
  const cplx offset(0.0, 2.0 * kPi * n_hi);

  SpectralFunction G{[raw_log, offset](cplx t) { return raw_log(t) - offset; }, HalfPlane::entire,
                     -normalizer.remainder_decay};

  auto K_minus = [G, contour, n_minus](cplx z) { return std::exp(cauchy_split(G, z, Side::minus, contour).value) / n_minus(z); };
  auto K_plus = [G, contour, n_plus](cplx z) { return std::exp(cauchy_split(G, z, Side::plus, contour).value) / n_plus(z); };

  const SplitResult at_pole = cauchy_split(G, zi, Side::minus, contour);
  const cplx Km_zi = std::exp(at_pole.value) / n_minus(zi);
  const cplx r = problem.forcing_residue(0);

  ScalarWHSolution sol;
  sol.K_minus = K_minus;
  sol.K_plus = K_plus;
  const double gp = problem.growth_plus.empty() ? 0.0 : problem.growth_plus[0];
  const double gm = problem.growth_minus.empty() ? 0.0 : problem.growth_minus[0];
  sol.U_plus = {[K_plus, Km_zi, r, zi](cplx z) { return -r / ((z - zi) * Km_zi * K_plus(z)); }, HalfPlane::upper, gp};
  sol.U_minus = {[K_minus, Km_zi, r, zi](cplx z) { return r / (z - zi) * (1.0 - K_minus(z) / Km_zi); },
                 HalfPlane::lower, gm};
  const double err_zi = at_pole.error_estimate;
  sol.error_estimate = [G, contour, err_zi](cplx z) {
    return cauchy_split(G, z, Side::plus, contour).error_estimate +
           cauchy_split(G, z, Side::minus, contour).error_estimate + err_zi;
  };
  return sol;
}

EmbeddingCoefficients plane_wave_coeffs(const CMatrix& weighted_samples, const CVector& target,
                                        std::vector<double> base_angles) {
  if (weighted_samples.rows() != weighted_samples.cols() || weighted_samples.rows() != target.size())
    throw Error(ErrorCode::invalid_argument, "plane_wave_coeffs needs a square system");
  for (size_t i = 0; i < base_angles.size(); ++i)
    for (size_t j = i + 1; j < base_angles.size(); ++j)
      if (base_angles[i] == base_angles[j])
        throw Error(ErrorCode::singular_matrix, "repeated base angle " + std::to_string(base_angles[i]));
  EmbeddingCoefficients out;
  out.base_angles = std::move(base_angles);
  out.coefficients = dense_solve(weighted_samples, target, &out.conditioning);
  const double bn = target.norm();
  const double rn = (weighted_samples * out.coefficients - target).norm();
  out.relative_residual = bn > 0.0 ? rn / bn : rn;
  return out;
}

CMatrix DirectivityGrid::weighted() const {
  CMatrix F = S;
  for (int m = 0; m < F.rows(); ++m)
    for (int n = 0; n < F.cols(); ++n) F(m, n) *= k * (std::cos(theta[m]) + std::cos(theta_i[n]));
  return F;
}

}  // namespace whembed
