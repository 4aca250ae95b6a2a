#include "whembed/strip.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "whembed/halfplane.hpp"

namespace whembed::strip {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

double j0(double x) { return std::cyl_bessel_j(0.0, std::abs(x)); }

// (i/4) H0(ka d) + J0(ka d) ln(d)/(2 pi): the part of the free-space kernel
// left after removing -(1/2 pi) J0 ln|s - t|.
cplx smooth_kernel(double d, double ka) {
  const double x = ka * d;
  if (x >= 2.0) return 0.25 * kI * hankel1_0(x) + j0(x) * std::log(d) / (2.0 * kPi);
  const double q = 0.25 * x * x;
  double term = 1.0, harmonic = 0.0, series = 0.0;
  for (int m = 1; m < 30; ++m) {
    term *= -q / (m * m);
    harmonic += 1.0 / m;
    series -= term * harmonic;
  }
  const cplx c = 0.25 * kI - (std::log(0.5 * ka) + kEulerGamma) / (2.0 * kPi);
  return c * j0(x) - series / (2.0 * kPi);
}

std::vector<double> chebyshev_points(int n, double shrink = 1.0) {
  std::vector<double> p(n);
  for (int j = 0; j < n; ++j) p[j] = shrink * std::cos(kPi * (j + 0.5) / n);
  return p;
}

// Integral of ln|s - t| T_j(t) (1 - t^2)^{-1/2} over [-1, 1].
double log_moment(int j, double s) {
  if (j == 0) return -kPi * std::log(2.0);
  return -kPi / j * chebyshev_T(j, s);
}

cplx incident(double s, double ka, double theta_i) { return std::exp(-kI * ka * s * std::cos(theta_i)); }

int worker_count(int requested, int jobs) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  return std::clamp(n, 1, std::max(1, jobs));
}

template <class F>
void parallel_for(int jobs, int threads, F&& body) {
  std::atomic<int> next{0};
  auto run = [&] {
    for (int j = next++; j < jobs; j = next++) body(j);
  };
  std::vector<std::thread> pool;
  const int n = worker_count(threads, jobs);
  for (int t = 1; t < n; ++t) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
}

}  // namespace

void StripConfig::validate() const {
  medium.validate();
  if (!(half_width > 0.0)) throw Error(ErrorCode::invalid_argument, "strip half-width must be positive");
}

Eigen::Matrix2cd StripWHData::kernel(cplx z) const {
  const double a = config.half_width;
  Eigen::Matrix2cd A;
  A << -std::exp(2.0 * kI * z * a), 1.0 / (kI * gamma_branch(z, config.medium)), 0.0, std::exp(-2.0 * kI * z * a);
  return A;
}

cplx StripWHData::forcing_pole(double theta_i) const { return config.medium.k() * std::cos(theta_i); }

Eigen::Vector2cd StripWHData::forcing_residue(double theta_i) const {
  return {kI * std::exp(kI * forcing_pole(theta_i) * config.half_width), 0.0};
}

Eigen::Vector2cd StripWHData::forcing(cplx z, double theta_i) const {
  return forcing_residue(theta_i) / (z - forcing_pole(theta_i));
}

cplx StripWHData::functional_rhs(cplx z, double theta_i) const {
  const cplx zi = forcing_pole(theta_i);
  return kI * std::exp(-kI * (z - zi) * config.half_width) / (z - zi);
}

MatrixWHProblem StripWHData::problem(double theta_i) const {
  MatrixWHProblem p;
  p.size = 2;
  const StripWHData self = *this;
  p.kernel = [self](cplx z) -> CMatrix { return self.kernel(z); };
  p.forcing_pole = forcing_pole(theta_i);
  p.forcing_residue = forcing_residue(theta_i);
  p.growth_minus = {-0.5, -0.5};
  p.growth_plus = {0.5, 0.5};
  return p;
}

StripWHData assemble_wh(const StripConfig& cfg) {
  cfg.validate();
  StripWHData d{cfg};
  const cplx det = d.kernel(cplx(0.37 * cfg.medium.k_real, 0.0)).determinant();
  if (std::abs(det + 1.0) > 1e-12) throw Error(ErrorCode::invalid_argument, "strip kernel determinant self-test failed");
  return d;
}

EmbeddingReport wh_data_checks(const StripConfig& cfg, int points, std::uint64_t seed) {
  const StripWHData d = assemble_wh(cfg);
  EmbeddingReport rep;
  rep.name = "strip_wh_data";
  const double k = cfg.medium.k_real;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-3.0 * k, 3.0 * k), uy(-2.0 / cfg.half_width, 2.0 / cfg.half_width);
  double det = 0.0, diag = 0.0, bridge = 0.0;
  const double theta_i = 0.75 * kPi;
  for (int j = 0; j < points; ++j) {
    const cplx z(ux(rng), uy(rng));
    const Eigen::Matrix2cd A = d.kernel(z);
    det = std::max(det, std::abs(A.determinant() + 1.0));
    diag = std::max(diag, std::abs(A(0, 0) * A(1, 1) + 1.0));
    const cplx lhs = std::exp(kI * z * cfg.half_width) * d.functional_rhs(z, theta_i);
    bridge = std::max(bridge, std::abs(lhs - d.forcing(z, theta_i)(0)) / std::abs(lhs));
  }
  rep.check("det_A_plus_one", det, 1e-14);
  rep.check("A11_A22_plus_one", diag, 1e-14);
  rep.check("A12_at_zero", std::abs(d.kernel(0.0)(0, 1) - 1.0 / (kI * cfg.medium.k())) * std::abs(cfg.medium.k()), 1e-15);
  rep.check("forcing_rescaled_by_exp_iza", bridge, 1e-13);
  rep.metric("points", points);
  return rep;
}

BieOperator::BieOperator(const StripConfig& cfg, int modes) : ka_(cfg.ka()), modes_(modes) {
  cfg.validate();
  if (cfg.medium.k_loss != 0.0)
    throw Error(ErrorCode::invalid_argument, "the strip integral equation is solved for a lossless medium");
  if (!(ka_ >= 0.1 && ka_ <= 100.0)) throw Error(ErrorCode::invalid_argument, "ka outside [0.1, 100]");
  const int min_modes = 8 + static_cast<int>(std::ceil(2.0 * ka_));
  if (modes < min_modes)
    throw Error(ErrorCode::invalid_argument, "n_modes must be at least " + std::to_string(min_modes));

  const int q = modes_ + static_cast<int>(ka_) + 20;
  galerkin_points_ = chebyshev_points(q);
  const CMatrix A = rows(galerkin_points_);
  test_.resize(modes_, q);
  for (int m = 0; m < modes_; ++m)
    for (int j = 0; j < q; ++j) test_(m, j) = kPi / q * chebyshev_T(m, galerkin_points_[j]);
  lu_.compute(test_ * A);
  check_points_ = chebyshev_points(2 * modes_, 0.999);
  check_rows_ = rows(check_points_);
}

CMatrix BieOperator::rows(const std::vector<double>& s) const {
  const int n = modes_;
  const int M = static_cast<int>(2.0 * ka_) + 40;
  const int P = n + M + 20;
  const std::vector<double> tp = chebyshev_points(P);
  const std::vector<double> tx = chebyshev_points(M + 1);
  Eigen::MatrixXd Tp(n, P), dct(M + 1, M + 1);
  for (int k = 0; k < n; ++k)
    for (int p = 0; p < P; ++p) Tp(k, p) = chebyshev_T(k, tp[p]);
  for (int m = 0; m <= M; ++m)
    for (int j = 0; j <= M; ++j) dct(m, j) = (m == 0 ? 1.0 : 2.0) / (M + 1) * std::cos(m * kPi * (j + 0.5) / (M + 1));

  CMatrix R(static_cast<int>(s.size()), n);
  for (int i = 0; i < static_cast<int>(s.size()); ++i) {
    const double sv = s[i];
    Eigen::VectorXd f(M + 1);
    for (int j = 0; j <= M; ++j) f(j) = j0(ka_ * (sv - tx[j]));
    const Eigen::VectorXd beta = dct * f;
    std::vector<double> L(M + n + 1);
    for (int j = 0; j <= M + n; ++j) L[j] = log_moment(j, sv);
    CVector sm(P);
    for (int p = 0; p < P; ++p) sm(p) = smooth_kernel(std::abs(sv - tp[p]), ka_);
    for (int k = 0; k < n; ++k) {
      double I = 0.0;
      for (int m = 0; m <= M; ++m) I += beta(m) * 0.5 * (L[m + k] + L[std::abs(m - k)]);
      cplx smooth = 0.0;
      for (int p = 0; p < P; ++p) smooth += sm(p) * Tp(k, p);
      R(i, k) = -I / (2.0 * kPi) + kPi / P * smooth;
    }
  }
  return R;
}

double BieOperator::boundary_residual(const CVector& c, double theta_i) const {
  const CVector v = check_rows_ * c;
  double r = 0.0;
  for (int j = 0; j < v.size(); ++j) r = std::max(r, std::abs(v(j) + incident(check_points_[j], ka_, theta_i)));
  return r;
}

DensitySolution BieOperator::solve(double theta_i, double residual_limit) const {
  const int q = static_cast<int>(galerkin_points_.size());
  CVector rhs(q);
  for (int j = 0; j < q; ++j) rhs(j) = -incident(galerkin_points_[j], ka_, theta_i);
  DensitySolution d;
  d.ka = ka_;
  d.theta_i = theta_i;
  d.coefficients = lu_.solve(test_ * rhs);
  d.boundary_residual = boundary_residual(d.coefficients, theta_i);
  if (!(d.boundary_residual <= residual_limit))
    throw Error(ErrorCode::not_converged, "boundary residual " + std::to_string(d.boundary_residual) + " with " +
                                              std::to_string(modes_) + " modes; increase n_modes");
  return d;
}

DensitySolution bie_solve(const StripConfig& cfg, double theta_i, int modes, double residual_limit) {
  return BieOperator(cfg, modes).solve(theta_i, residual_limit);
}

cplx directivity_from_density(const DensitySolution& d, double theta) {
  const double x = d.ka * std::cos(theta);
  cplx sum = 0.0, phase = 1.0;
  for (int n = 0; n < d.coefficients.size(); ++n) {
    sum += d.coefficients(n) * phase * bessel_j(n, x);
    phase *= -kI;
  }
  return kFarFieldNorm * kPi * sum;
}

DirectivityGrid directivity_grid(const BieOperator& op, const std::vector<double>& theta,
                                 const std::vector<double>& theta_i, int threads) {
  DirectivityGrid g;
  g.theta = theta;
  g.theta_i = theta_i;
  g.k = op.ka();
  g.convention = "S = -(i/2) int exp(-i k x cos theta) mu(x) dx, k = ka, a = 1";
  g.S.resize(static_cast<int>(theta.size()), static_cast<int>(theta_i.size()));
  parallel_for(static_cast<int>(theta_i.size()), threads, [&](int n) {
    const DensitySolution d = op.solve(theta_i[n]);
    for (size_t m = 0; m < theta.size(); ++m) g.S(static_cast<int>(m), n) = directivity_from_density(d, theta[m]);
  });
  return g;
}

DirectivityGrid directivity_grid(const StripConfig& cfg, const std::vector<double>& theta,
                                 const std::vector<double>& theta_i, int modes, int threads) {
  DirectivityGrid g = directivity_grid(BieOperator(cfg, modes), theta, theta_i, threads);
  g.k = cfg.medium.k_real;
  return g;
}

std::vector<double> interior_angles(int n) {
  std::vector<double> t(n);
  const double lo = 5.0 * kPi / 180.0, hi = 175.0 * kPi / 180.0;
  for (int j = 0; j < n; ++j) t[j] = n == 1 ? 0.5 * kPi : lo + (hi - lo) * j / (n - 1);
  return t;
}

double reciprocity_defect(const DirectivityGrid& grid) {
  if (grid.theta != grid.theta_i) throw Error(ErrorCode::invalid_argument, "reciprocity needs a square grid");
  return (grid.S - grid.S.transpose()).cwiseAbs().maxCoeff();
}

double optical_theorem_defect(const DensitySolution& d, int samples) {
  double sum = 0.0;
  for (int j = 0; j < samples; ++j) sum += std::norm(directivity_from_density(d, 2.0 * kPi * j / samples));
  const double total = sum * 2.0 * kPi / samples;
  const double forward = 4.0 * kPi * directivity_from_density(d, kPi - d.theta_i).real();
  return std::abs(total - forward) / std::abs(forward);
}

EmbeddingReport rank2_embedding_check(const DirectivityGrid& grid, const Rank2Options& opt) {
  if (grid.theta != grid.theta_i) throw Error(ErrorCode::invalid_argument, "rank-2 check needs a square grid");
  if (grid.theta.size() < 32) throw Error(ErrorCode::invalid_argument, "rank-2 check needs at least 32 angles");
  const double margin = 5.0 * kPi / 180.0 - 1e-12;
  for (double t : grid.theta)
    if (t < margin || t > kPi - margin)
      throw Error(ErrorCode::invalid_argument, "rank-2 grid angles must stay 5 degrees from 0 and pi");
  EmbeddingReport rep;
  rep.name = "strip_rank2";
  const CMatrix F = grid.weighted();
  const Eigen::VectorXd sv = dense_svd(F);
  rep.check("sigma3_over_sigma1", sv(2) / sv(0), opt.rank_tolerance);
  rep.check("F_symmetry", (F - F.transpose()).cwiseAbs().maxCoeff() / F.cwiseAbs().maxCoeff(), opt.symmetry_tolerance);
  rep.metric("sigma2_over_sigma1", sv(1) / sv(0));
  rep.metric("grid", static_cast<double>(grid.theta.size()));
  rep.metric("ka", grid.k);
  return rep;
}

EdgeDirectivities extract_edge_directivities(const CMatrix& F, const std::vector<double>& theta, double ka) {
  const int n = static_cast<int>(theta.size());
  if (F.rows() != n || F.cols() != n) throw Error(ErrorCode::invalid_argument, "F must be square over theta");
  for (int j = 0; j < n; ++j)
    if (std::abs(theta[j] + theta[n - 1 - j] - kPi) > 1e-12)
      throw Error(ErrorCode::invalid_argument, "edge extraction needs an angle grid symmetric about pi/2");

  Eigen::JacobiSVD<CMatrix> svd(F, Eigen::ComputeThinU);
  const CMatrix Q = svd.matrixU().leftCols(2);
  const CMatrix B = Q.adjoint() * F * Q.conjugate();
  Eigen::ComplexEigenSolver<CMatrix> es(B * (Q.transpose() * Q));
  std::vector<CVector> f;
  for (int j = 0; j < 2; ++j) {
    const CVector v = Q * es.eigenvectors().col(j);
    f.push_back(std::sqrt(es.eigenvalues()(j) / v.cwiseProduct(v).sum()) * v);
  }

  // Reference shape for s1: the x = -a edge, e^{ika cos theta} sin(theta/2).
  CVector ref(n);
  for (int j = 0; j < n; ++j) ref(j) = std::exp(kI * ka * std::cos(theta[j])) * std::sin(0.5 * theta[j]);

  EdgeDirectivities best;
  best.theta = theta;
  double best_score = -1.0;
  double best_res = std::numeric_limits<double>::infinity();
  for (int x = 0; x < 2; ++x)
    for (int sigma : {1, -1}) {
      const CVector s2 = f[x];
      const CVector s1 = kI * f[1 - x];
      double res = 0.0;
      for (int j = 0; j < n; ++j) res = std::max(res, std::abs(s2(j) - double(sigma) * s1(n - 1 - j)));
      res /= s1.cwiseAbs().maxCoeff();
      const double score = std::abs(ref.dot(s1)) / (ref.norm() * s1.norm());
      const bool tie = std::abs(res - best_res) < 1e-8 * (1.0 + best_res) || (res < 1e-6 && best_res < 1e-6);
      if ((res < best_res && !tie) || (tie && score > best_score)) {
        best_res = res;
        best_score = score;
        best.s1 = s1;
        best.s2 = s2;
        best.sigma = sigma;
      }
    }
  // Global sign: s1 positively correlated with the reference.
  if (ref.dot(best.s1).real() < 0.0) {
    best.s1 = -best.s1;
    best.s2 = -best.s2;
  }
  best.reflection_residual = best_res;
  const CMatrix R = best.s2 * best.s2.transpose() - best.s1 * best.s1.transpose();
  best.reconstruction_residual = (F - R).cwiseAbs().maxCoeff() / F.cwiseAbs().maxCoeff();
  if (best.reflection_residual > 1e-3)
    throw Error(ErrorCode::gauge_ambiguous,
                "reflection residual " + std::to_string(best.reflection_residual) + " exceeds 1e-3");
  return best;
}

EmbeddingReport plane_wave_embed(double theta_1, double theta_2, double theta_star, const BieOperator& op,
                                 const PlaneWaveStripOptions& opt) {
  EmbeddingReport rep;
  rep.name = "strip_plane_wave";
  const double k = op.ka();
  const DensitySolution d1 = op.solve(theta_1), d2 = op.solve(theta_2), ds = op.solve(theta_star);
  auto weighted = [k](const DensitySolution& d, double theta) {
    return k * (std::cos(theta) + std::cos(d.theta_i)) * directivity_from_density(d, theta);
  };
  CMatrix M(2, 2);
  M << weighted(d1, theta_1), weighted(d2, theta_1), weighted(d1, theta_2), weighted(d2, theta_2);
  // Target column by reciprocity: S^(theta_m, theta*) = S^(theta*, theta_m).
  CVector target(2);
  target << weighted(d1, theta_star), weighted(d2, theta_star);
  const EmbeddingCoefficients A = plane_wave_coeffs(M, target, {theta_1, theta_2});
  rep.calibration("A1", A.coefficients(0), "reciprocity system");
  rep.calibration("A2", A.coefficients(1), "reciprocity system");
  rep.metric("conditioning", A.conditioning);
  rep.check("coefficient_residual", A.relative_residual, 1e-12);

  double err = 0.0, smax = 0.0, pointwise = 0.0;
  int masked = 0;
  std::vector<std::pair<cplx, cplx>> kept;
  for (int j = 0; j < opt.observation_grid; ++j) {
    const double th = (j + 0.5) * kPi / opt.observation_grid;
    const double c = std::cos(th) + std::cos(theta_star);
    if (std::abs(c) <= opt.mask) {
      ++masked;
      continue;
    }
    const cplx pred = (A.coefficients(0) * weighted(d1, th) + A.coefficients(1) * weighted(d2, th)) / (k * c);
    const cplx direct = directivity_from_density(ds, th);
    kept.emplace_back(pred, direct);
    smax = std::max(smax, std::abs(direct));
  }
  for (const auto& [pred, direct] : kept) {
    err = std::max(err, std::abs(pred - direct));
    pointwise = std::max(pointwise, std::abs(pred - direct) / std::abs(direct));
  }
  rep.check("masked_relative_error", pointwise, opt.tolerance);
  rep.metric("masked_error_over_max_S", err / smax);
  rep.metric("masked_points", masked);
  rep.metric("mask_threshold", opt.mask);
  rep.metric("max_boundary_residual", std::max({d1.boundary_residual, d2.boundary_residual, ds.boundary_residual}));
  return rep;
}

EmbeddingReport edge_asymptotic_calibration(double ka, int modes, int grid) {
  EmbeddingReport rep;
  rep.name = "strip_edge_calibration";
  const StripConfig cfg = StripConfig::from_ka(ka);
  const BieOperator op(cfg, modes);
  const MediumConfig hp{ka, 0.0};
  std::vector<double> angles;
  for (int j = 0; j < grid; ++j) angles.push_back((30.0 + 120.0 * (j + 0.5) / grid) * kPi / 180.0);
  cplx num = 0.0;
  double den = 0.0;
  std::vector<std::pair<cplx, cplx>> pairs;
  for (double ti : angles) {
    const DensitySolution d = op.solve(ti);
    for (double th : angles) {
      const double c = std::cos(th) + std::cos(ti);
      if (std::abs(c) < 0.3) continue;
      // Edge x = +a sees the screen towards theta = pi; edge x = -a towards theta = 0.
      const cplx model = halfplane::directivity(kPi - th, kPi - ti, hp) * std::exp(-kI * ka * c) +
                         halfplane::directivity(th, ti, hp) * std::exp(kI * ka * c);
      const cplx s = directivity_from_density(d, th);
      pairs.emplace_back(model, s);
      num += std::conj(model) * s;
      den += std::norm(model);
    }
  }
  const cplx c = num / den;
  double misfit = 0.0, smax = 0.0;
  for (const auto& [model, s] : pairs) {
    misfit = std::max(misfit, std::abs(s - c * model));
    smax = std::max(smax, std::abs(s));
  }
  rep.calibration("two_edge_fit", c, "least-squares fit of S_strip to the two-edge half-plane sum at ka = " +
                                         std::to_string(ka));
  rep.metric("relative_misfit", misfit / smax);
  rep.metric("samples", static_cast<double>(pairs.size()));
  rep.check("fit_constant_is_one", std::abs(c - 1.0), 1e-3);
  return rep;
}

DirectivityGrid figure3_grid(double ka, int n, int modes) {
  std::vector<double> theta(n);
  for (int j = 0; j < n; ++j) theta[j] = (j + 0.5) * kPi / n;
  const StripConfig cfg = StripConfig::from_ka(ka);
  return directivity_grid(cfg, theta, {0.25 * kPi, 0.5 * kPi}, modes > 0 ? modes : default_modes(ka));
}

int default_modes(double ka) { return std::max(40, 20 + static_cast<int>(std::ceil(2.0 * ka))); }

}  // namespace whembed::strip
