#pragma once

#include <functional>
#include <string>
#include <vector>

#include "whembed/numerics.hpp"
#include "whembed/report.hpp"

namespace whembed {

// U^-(t) = K(t) U^+(t) + r/(t - z_i) on the contour.
struct MatrixWHProblem {
  int size = 1;
  std::function<CMatrix(cplx)> kernel;
  cplx forcing_pole;
  CVector forcing_residue;
  std::vector<double> growth_minus;
  std::vector<double> growth_plus;

  CVector forcing(cplx z) const { return forcing_residue / (z - forcing_pole); }
};

// Columns of X^-(z), X^+(z) solve the homogeneous problem X^- = K X^+.
struct NormalFamily {
  int size = 1;
  std::function<CMatrix(cplx)> X_minus;
  std::function<CMatrix(cplx)> X_plus;
  std::function<cplx(cplx)> det_reference;
};

struct EmbeddingCoefficients {
  std::vector<double> base_angles;
  CVector coefficients;
  double conditioning = 0.0;
  double relative_residual = 0.0;
};

struct NormalTolerances {
  double relation = 1e-12;
  double determinant = 1e-12;
  double factorization = 1e-10;
};

EmbeddingReport verify_normal(const NormalFamily& family, const MatrixWHProblem& problem,
                              const std::vector<double>& grid, NormalTolerances tol = {});

// U^+(z) = numerator(z) / (z - pole) with numerator = -X^+(z) X^-(z_i)^{-1} r.
struct PoleEmbedding {
  std::function<CVector(cplx)> numerator;
  cplx pole;

  CVector operator()(cplx z) const { return numerator(z) / (z - pole); }
  VectorSpectralFunction as_function(std::vector<double> growth = {}) const;
};

PoleEmbedding embed_pole_solution(const NormalFamily& family, cplx z_i, const CVector& r);

// K = (K n^-)(K n^+)/(n^- n^+) split: n^- analytic and zero-free below the
// contour, n^+ above, and log(K n^- n^+) = O(|t|^-remainder_decay).
struct AlgebraicNormalizer {
  std::function<cplx(cplx)> n_minus;
  std::function<cplx(cplx)> n_plus;
  double remainder_decay = 2.0;
};

struct ScalarWHSolution {
  SpectralFunction U_minus;
  SpectralFunction U_plus;
  std::function<cplx(cplx)> K_minus;
  std::function<cplx(cplx)> K_plus;
  // Quadrature error estimate of log K^+ and log K^- at z, plus that at z_i.
  std::function<double(cplx)> error_estimate;
};

ScalarWHSolution solve_scalar_wh_numeric(const MatrixWHProblem& problem, const ContourSpec& contour,
                                         const AlgebraicNormalizer& normalizer);

// Solves sum_j samples(m, j) B_j = target(m).
EmbeddingCoefficients plane_wave_coeffs(const CMatrix& weighted_samples, const CVector& target,
                                        std::vector<double> base_angles = {});

// Sampled directivity over observation x incidence angles (radians).
struct DirectivityGrid {
  std::vector<double> theta;
  std::vector<double> theta_i;
  // S(theta[m], theta_i[n]).
  CMatrix S;
  double k = 1.0;
  std::string convention;

  // F(theta, theta_i) = (k cos theta + k cos theta_i) S.
  CMatrix weighted() const;
};

}  // namespace whembed
