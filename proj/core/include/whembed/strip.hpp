#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "whembed/numerics.hpp"
#include "whembed/report.hpp"
#include "whembed/wh_core.hpp"

namespace whembed::strip {

struct StripConfig {
  double half_width = 1.0;
  MediumConfig medium;

  double ka() const { return medium.k_real * half_width; }
  void validate() const;

  static StripConfig from_ka(double ka) { return {1.0, {ka, 0.0}}; }
};

// A(z) = {-e^{2iza}, (i gamma)^{-1}; 0, e^{-2iza}}, forcing i e^{i z_i a} (1, 0)^T / (z - z_i).
struct StripWHData {
  StripConfig config;

  Eigen::Matrix2cd kernel(cplx z) const;
  cplx forcing_pole(double theta_i) const;
  Eigen::Vector2cd forcing_residue(double theta_i) const;
  Eigen::Vector2cd forcing(cplx z, double theta_i) const;
  // Right side of the three-function equation, i e^{-i(z - z_i)a}/(z - z_i).
  cplx functional_rhs(cplx z, double theta_i) const;
  MatrixWHProblem problem(double theta_i) const;
};

StripWHData assemble_wh(const StripConfig& cfg);
EmbeddingReport wh_data_checks(const StripConfig& cfg, int points = 100, std::uint64_t seed = 5);

// mu(a t) a dt = sum_n c_n T_n(t) (1 - t^2)^{-1/2} dt.
struct DensitySolution {
  double ka = 0.0;
  double theta_i = 0.0;
  CVector coefficients;
  double boundary_residual = 0.0;
};

// Weighted-Chebyshev Galerkin discretization of the single-layer operator on
// [-a, a]. Independent of the incidence; factor once, solve many.
class BieOperator {
 public:
  BieOperator(const StripConfig& cfg, int modes);

  int modes() const { return modes_; }
  double ka() const { return ka_; }
  DensitySolution solve(double theta_i, double residual_limit = 1e-8) const;
  // max |(A mu)(s) + u_in(s)| at 2*modes Chebyshev points.
  double boundary_residual(const CVector& c, double theta_i) const;

 private:
  CMatrix rows(const std::vector<double>& s) const;

  double ka_;
  int modes_;
  CMatrix check_rows_;
  std::vector<double> check_points_;
  Eigen::PartialPivLU<CMatrix> lu_;
  CMatrix test_;
  std::vector<double> galerkin_points_;
};

DensitySolution bie_solve(const StripConfig& cfg, double theta_i, int modes, double residual_limit = 1e-8);

// c_norm * integral of e^{-i k x cos theta} mu(x) dx.
inline const cplx kFarFieldNorm{0.0, -0.5};
cplx directivity_from_density(const DensitySolution& d, double theta);

// Solves every incidence with one factored operator, in parallel.
DirectivityGrid directivity_grid(const StripConfig& cfg, const std::vector<double>& theta,
                                 const std::vector<double>& theta_i, int modes, int threads = 0);
DirectivityGrid directivity_grid(const BieOperator& op, const std::vector<double>& theta,
                                 const std::vector<double>& theta_i, int threads = 0);

// n angles equispaced in [5 deg, 175 deg].
std::vector<double> interior_angles(int n);

double reciprocity_defect(const DirectivityGrid& grid);

// Relative defect |int_0^{2pi} |S|^2 - 4 pi Re S(pi - theta_i)| / (4 pi |Re S(pi - theta_i)|).
double optical_theorem_defect(const DensitySolution& d, int samples = 512);

struct Rank2Options {
  double rank_tolerance = 1e-5;
  double symmetry_tolerance = 1e-8;
};

EmbeddingReport rank2_embedding_check(const DirectivityGrid& grid, const Rank2Options& opt = {});

struct EdgeDirectivities {
  std::vector<double> theta;
  CVector s1;
  CVector s2;
  int sigma = 1;
  double reflection_residual = 0.0;
  double reconstruction_residual = 0.0;
};

// F = s2 s2^T - s1 s1^T with s2(theta) = sigma s1(pi - theta). The angle grid
// must be symmetric about pi/2.
EdgeDirectivities extract_edge_directivities(const CMatrix& F, const std::vector<double>& theta, double ka);

struct PlaneWaveStripOptions {
  int observation_grid = 181;
  double mask = 0.1;
  double tolerance = 1e-5;
};

EmbeddingReport plane_wave_embed(double theta_1, double theta_2, double theta_star, const BieOperator& op,
                                 const PlaneWaveStripOptions& opt = {});

// Fits S_strip against the two-edge half-plane sum at large ka; the fitted
// constant is the calibration of kFarFieldNorm against the half-plane module.
EmbeddingReport edge_asymptotic_calibration(double ka = 40.0, int modes = 110, int grid = 24);

// Fig. 3 data: panels theta_i = 45 deg and 90 deg, theta = (j + 1/2) pi/n.
DirectivityGrid figure3_grid(double ka, int n, int modes = 0);

int default_modes(double ka);

}  // namespace whembed::strip
