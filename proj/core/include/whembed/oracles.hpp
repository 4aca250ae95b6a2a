#pragma once

#include <string>

#include "whembed/numerics.hpp"

namespace whembed::oracles {

// Dirichlet half-plane diffraction coefficient (screen along theta = 0):
// (i/2) [sec((theta - theta_i)/2) - sec((theta + theta_i)/2)].
cplx sommerfeld_halfplane(double theta, double theta_i);

// Dirichlet wedge coefficient with exterior-angle parameter n = 3/2:
// (sin(pi/n)/n) [1/(cos(pi/n) - cos((theta - theta_i)/n)) - 1/(cos(pi/n) - cos((theta + theta_i)/n))].
cplx gtd_wedge(double theta, double theta_i);

struct CalibrationResult {
  cplx constant;
  double max_ratio_deviation = 0.0;
  int sample_count = 0;
  std::string mask;
};

// constant = mean(candidate/reference) over mask; deviation = max |ratio/constant - 1|.
CalibrationResult calibrate(const CMatrix& reference, const CMatrix& candidate,
                            const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>& mask,
                            const std::string& mask_description = "", int min_samples = 100);

}  // namespace whembed::oracles
