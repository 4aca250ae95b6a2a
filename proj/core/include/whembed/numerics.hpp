#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "whembed/errors.hpp"

namespace whembed {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr cplx kI{0.0, 1.0};

struct MediumConfig {
  double k_real = 1.0;
  double k_loss = 0.0;

  cplx k() const { return {k_real, k_loss}; }
  void validate() const;

  static MediumConfig identity_checks(double k_real = 1.0) { return {k_real, 1e-6 * k_real}; }
  static MediumConfig numeric_solve(double k_real = 1.0) { return {k_real, 1e-3 * k_real}; }
};

enum class HalfPlane { upper, lower, entire };
enum class Side { plus, minus };

struct SpectralFunction {
  std::function<cplx(cplx)> evaluate;
  HalfPlane half_plane = HalfPlane::entire;
  double growth_exponent = 0.0;

  cplx operator()(cplx z) const { return evaluate(z); }
};

struct VectorSpectralFunction {
  std::function<CVector(cplx)> evaluate;
  HalfPlane half_plane = HalfPlane::entire;
  std::vector<double> growth_exponents;

  CVector operator()(cplx z) const { return evaluate(z); }
  SpectralFunction component(int i) const;
};

enum class QuadratureScheme { gauss_legendre_composite };

// Integration path Im t = -indentation over [-T, T]. Panels are graded
// geometrically towards each point of `refine_at` down to `refine_min`, and
// grow geometrically outwards from 1.5*scale to T.
struct ContourSpec {
  double truncation = 40.0;
  double indentation = 1e-7;
  int nodes = 2000;
  QuadratureScheme scheme = QuadratureScheme::gauss_legendre_composite;
  double scale = 1.0;
  std::vector<double> refine_at;
  double refine_min = 1e-3;

  void validate() const;
  // Real breakpoints of the composite rule, ascending, from -T to T.
  std::vector<double> breakpoints() const;
  int nodes_per_panel() const;

  // Contour adapted to a lossy medium: refinement at +-k_real, indentation
  // 0.1*k_loss (so the path separates the branch points +-k).
  static ContourSpec for_medium(const MediumConfig& m, double truncation_factor = 40.0, int nodes = 2000);
};

struct SplitResult {
  cplx value;
  double error_estimate = 0.0;
};

// gamma(z) = sqrt(k - z) * sqrt(k + z), principal roots.
cplx gamma_branch(cplx z, const MediumConfig& cfg);
// Principal arccos(z/k); exact 0 and pi at z = +-k.
cplx theta_branch(cplx z, const MediumConfig& cfg);
// sin(nu*phi)/sin(phi), analytic through phi = 0.
cplx sin_ratio(double nu, cplx phi);
cplx chebyshev_T(int n, cplx x);
double chebyshev_T(int n, double x);

// Gamma function on the real line; negative non-integers use reflection.
double gamma_fn(double x);
double bessel_j(int n, double x);
cplx hankel1_0(double x);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w);

// [G]^{+-}(z) = +-(1/2 pi i) * integral of G(t)/(t - z) along the contour.
// Points on the wrong side of (or within indentation of) the path are reached
// by shifting the path through z, which requires G analytic in between.
SplitResult cauchy_split(const SpectralFunction& G, cplx z, Side side, const ContourSpec& contour);

// Max relative defect of Cauchy reproduction of f at the points; f must be
// analytic on the side's half-plane above/below the path.
double analyticity_defect(const SpectralFunction& f, const std::vector<cplx>& points, Side side,
                          const ContourSpec& contour);

CVector dense_solve(const CMatrix& A, const CVector& b, double* condition = nullptr);
Eigen::VectorXd dense_svd(const CMatrix& A);

}  // namespace whembed
