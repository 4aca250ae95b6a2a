#pragma once

#include <vector>

#include "whembed/numerics.hpp"
#include "whembed/report.hpp"
#include "whembed/wh_core.hpp"

namespace whembed::wedge {

using Matrix2c = Eigen::Matrix2cd;
using Vector2c = Eigen::Vector2cd;
using Matrix3c = Eigen::Matrix3cd;
using Vector3c = Eigen::Vector3cd;

struct WedgeKernel {
  MediumConfig medium;

  // (1/2 gamma) {gamma, -3i gamma^2; i, -gamma}
  Matrix2c K(cplx z) const;
  // -(k sin theta_i)/((z - z_i) gamma) (gamma, i) + 2 k sin theta_i/(z + z_i) (1, 0), z_i = k cos theta_i.
  Vector2c forcing(cplx z, double theta_i) const;
  // Pre-projection 3x3 system and the projection P.
  Matrix3c K3(cplx z) const;
  Vector3c F3(cplx z, double theta_i) const;
  static Eigen::Matrix3d P();
  static Eigen::Matrix3d P_inverse();
  Matrix3c projected(cplx z) const;
  // |K^{-1}(gamma, i) - (2 gamma, 0)|.
  double identity_defect(cplx z) const;
};

WedgeKernel assemble_reduced_kernel(const MediumConfig& m);

// a(z) = cos(theta(z)/3), b(z) = -(i/(sqrt3 gamma)) sin(theta(z)/3).
// left(z) = {a, 3 gamma^2 b; -b, -a} (analytic above the contour, det -1),
// right(z) = {a(-z), 3 gamma^2 b(-z); b(-z), a(-z)} (analytic below, det +1).
struct DKFactorization {
  MediumConfig medium;

  cplx a(cplx z) const;
  cplx b(cplx z) const;
  Matrix2c left(cplx z) const;
  Matrix2c right(cplx z) const;
  // Factors with the published sign convention; their product is -K.
  Matrix2c left_as_published(cplx z) const;
  double residual(const std::vector<double>& grid) const;
};

DKFactorization dk_factorize(const MediumConfig& m);

struct NormalMatrixTilde {
  MediumConfig medium;
  cplx C11, C12, C21, C22;

  Matrix2c X_minus(cplx z) const;
  Matrix2c X_plus(cplx z) const;
  NormalFamily family(cplx det_constant) const;
  // Leading constants of X^-(z) ~ {C z^(2/3), C z^(4/3); C z^(-1/3), C z^(1/3)}.
  static Matrix2c growth_constants();
};

NormalMatrixTilde normal_matrix(const MediumConfig& m);

// Measured det X^-(z)/z: mean over real sample points and its max relative spread.
cplx measured_det_constant(const NormalMatrixTilde& X, const std::vector<double>& grid, double* spread = nullptr);

struct FactorizationOptions {
  double det_tolerance = 1e-14;
  double identity_tolerance = 1e-13;
  double dk_tolerance = 1e-10;
  double analyticity_tolerance = 1e-8;
  double relation_tolerance = 1e-10;
  double growth_tolerance = 1e-3;
};

// Kernel, projection, DK factors and normal matrix checks.
EmbeddingReport factorization_checks(const MediumConfig& m, const FactorizationOptions& opt = {});

// Closed-form directivity; finite on the diagonal theta = theta_i.
// Throws OpticalBoundary at the genuine poles theta + theta_i in {pi, 2pi}, |theta - theta_i| = pi.
cplx closed_form_directivity(double theta, double theta_i);

// S_j(theta) = -k sin(theta) X^-_{2j}(-k cos theta).
cplx canonical_edge_directivity(const NormalMatrixTilde& X, int j, double theta);

struct CanonicalOptions {
  int grid = 40;
  double tolerance = 1e-10;
};

// Weighted closed form (cos 2theta - cos 2theta_j) S(theta, theta_j).
cplx weighted_directivity(double theta, double theta_j);

EmbeddingReport canonical_embedding_check(const MediumConfig& m, const CanonicalOptions& opt = {});

struct MappedScalarData {
  double theta_i = 0.0;
  double alpha_in = 0.0;
  double r = 0.0;

  static double alpha_of_psi(double psi);
  static double psi_of_alpha(double alpha);
  static cplx alpha_of_z(cplx z, const MediumConfig& m);
  double phi(double alpha) const;
};

MappedScalarData mapped_data(double theta_i);
double residue_r(double theta_i);
cplx mapped_directivity(double theta, double theta_i);

struct MappedOptions {
  int observation_grid = 30;
  int incidence_grid = 10;
  double tolerance = 1e-10;
};

// Ratio mapped/closed form over observation x incidence grid with theta_i in (pi/2, pi).
EmbeddingReport mapped_route_check(const MappedOptions& opt = {});

// Polynomial coefficients c0, c1, c2 of Q(alpha) Phi(alpha) for incidence theta.
Eigen::Vector3d c_coefficients(double theta);
double q_polynomial(double alpha, double theta_i);

struct PlaneWaveOptions {
  int grid = 60;
  int alpha_samples = 50;
  double tolerance = 1e-10;
  double mask = 0.05;
};

EmbeddingReport plane_wave_embed_wedge(double theta_1, double theta_2, double theta_i,
                                       const PlaneWaveOptions& opt = {});

EmbeddingReport q_polynomial_checks(const MediumConfig& m, double theta_i = 2.0);

}  // namespace whembed::wedge
