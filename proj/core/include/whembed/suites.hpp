#pragma once

#include "whembed/report.hpp"

namespace whembed::suites {

struct HalfPlaneOracleOptions {
  int grid = 60;
  double tolerance = 1e-12;
};

// Ratio of the embedding formula to the Sommerfeld coefficient over a grid in
// (5 deg, 175 deg)^2, calibrated once at (pi/2, 3pi/4).
EmbeddingReport halfplane_oracle(const HalfPlaneOracleOptions& opt = {});

struct HalfPlaneNumericOptions {
  int nodes = 2000;
  double truncation_factor = 40.0;
  double tolerance = 1e-6;
};

EmbeddingReport halfplane_numeric(const HalfPlaneNumericOptions& opt = {});
EmbeddingReport halfplane_demo(double tolerance = 1e-12);
// Closed-form identities of the half-plane spectra.
EmbeddingReport halfplane_identities(double tolerance = 1e-12);

struct HalfPlaneSuiteOptions {
  HalfPlaneOracleOptions oracle;
  HalfPlaneNumericOptions numeric;
  double demo_tolerance = 1e-12;
};

EmbeddingReport halfplane_suite(const HalfPlaneSuiteOptions& opt = {});

struct StripSuiteOptions {
  double ka = 10.0;
  int modes = 40;
  int grid = 48;
  double residual_tolerance = 1e-10;
  double reciprocity_tolerance = 1e-8;
  double optical_tolerance = 1e-6;
  double rank_tolerance = 1e-5;
  double embed_tolerance = 1e-5;
  double reflection_tolerance = 1e-4;
  double theta_1_deg = 60.0;
  double theta_2_deg = 120.0;
  double theta_star_deg = 75.0;
  bool edge_calibration = true;
};

EmbeddingReport strip_suite(const StripSuiteOptions& opt = {});

struct WedgeGtdOptions {
  int grid = 40;
  double tolerance = 1e-10;
};

// Ratio of the closed-form wedge directivity to the GTD coefficient over
// (0, 3pi/2)^2 away from the poles, at two grid resolutions.
EmbeddingReport wedge_gtd(const WedgeGtdOptions& opt = {});

struct WedgeSuiteOptions {
  double tolerance = 1e-10;
  double q_tolerance = 1e-13;
  double theta_1_deg = 100.0;
  double theta_2_deg = 150.0;
  double theta_i_deg = 125.0;
};

EmbeddingReport wedge_suite(const WedgeSuiteOptions& opt = {});

}  // namespace whembed::suites
