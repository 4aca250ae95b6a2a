#include "whembed/oracles.hpp"

#include <cmath>

namespace whembed::oracles {

cplx sommerfeld_halfplane(double theta, double theta_i) {
  const double a = std::cos(0.5 * (theta - theta_i));
  const double b = std::cos(0.5 * (theta + theta_i));
  if (std::abs(theta + theta_i - kPi) <= 1e-6 || std::abs(std::abs(theta - theta_i) - kPi) <= 1e-6)
    throw Error(ErrorCode::optical_boundary, "sommerfeld_halfplane: optical boundary");
  return 0.5 * kI * (1.0 / a - 1.0 / b);
}

cplx gtd_wedge(double theta, double theta_i) {
  const double n = 1.5;
  const double cn = std::cos(kPi / n);
  const double d1 = cn - std::cos((theta - theta_i) / n);
  const double d2 = cn - std::cos((theta + theta_i) / n);
  if (std::abs(d1) <= 1e-10 || std::abs(d2) <= 1e-10)
    throw Error(ErrorCode::optical_boundary, "gtd_wedge: optical boundary");
  return std::sin(kPi / n) / n * (1.0 / d1 - 1.0 / d2);
}

CalibrationResult calibrate(const CMatrix& reference, const CMatrix& candidate,
                            const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>& mask,
                            const std::string& mask_description, int min_samples) {
  if (reference.rows() != candidate.rows() || reference.cols() != candidate.cols() ||
      mask.rows() != reference.rows() || mask.cols() != reference.cols())
    throw Error(ErrorCode::invalid_argument, "calibrate: grids not aligned");
  CalibrationResult out;
  out.mask = mask_description;
  cplx sum = 0.0;
  for (Eigen::Index i = 0; i < reference.rows(); ++i)
    for (Eigen::Index j = 0; j < reference.cols(); ++j)
      if (mask(i, j)) {
        sum += candidate(i, j) / reference(i, j);
        ++out.sample_count;
      }
  if (out.sample_count < min_samples)
    throw Error(ErrorCode::empty_mask, "mask selects " + std::to_string(out.sample_count) + " samples");
  out.constant = sum / static_cast<double>(out.sample_count);
  for (Eigen::Index i = 0; i < reference.rows(); ++i)
    for (Eigen::Index j = 0; j < reference.cols(); ++j)
      if (mask(i, j))
        out.max_ratio_deviation =
            std::max(out.max_ratio_deviation, std::abs(candidate(i, j) / reference(i, j) / out.constant - 1.0));
  return out;
}

}  // namespace whembed::oracles
