#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fringe/field.hpp"

namespace fringe::ellipse {

// Centered Lissajous samples: x from the frame sum, y from the frame
// difference, both with the empirical mean removed.
struct LissajousCloud {
  std::vector<double> x;
  std::vector<double> y;
  double mean_x = 0.0;  // offsets removed by build_cloud; zero for raw clouds
  double mean_y = 0.0;

  std::size_t count() const { return x.size(); }
};

// Builds the cloud from two normalized frames. Pixels are taken on a square
// grid starting at `border_crop` with step `stride` along both axes; the
// empirical means of the sum and difference channels are subtracted.
// Throws degeneracy_error when fewer than 8 samples survive.
LissajousCloud build_cloud(const ScalarField& n1, const ScalarField& n2, int stride = 1,
                           int border_crop = 0);

// Wraps raw coordinates without centering, for callers that already work in
// ellipse coordinates (tests, diagnostics).
LissajousCloud cloud_from_points(std::vector<double> x, std::vector<double> y);

// Axis-aligned centered conic theta1*x^2 + theta2*y^2 = 1.
struct EllipseFit2 {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double residual_rms = 0.0;   // sqrt(mean (theta1 x^2 + theta2 y^2 - 1)^2), unweighted
  int iterations_used = 1;     // linear solves performed
  bool degenerate = false;     // non-positive theta: conic is not an ellipse
  // Robust objective after each solve; empty for plain LS. Recorded at scale
  // 2*kappa: the weights exp(-2 kappa r^2) majorize-minimize the potential
  // whose scale matches their exponent, so only that trace is guaranteed
  // non-increasing.
  std::vector<double> objective_trace;
};

// General conic theta1*x^2 + theta2*y^2 + theta3*x + theta4*y = 1
// (coefficient of the constant term pinned to -1, stored as theta5).
struct EllipseFit5 {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;
  double theta4 = 0.0;
  double theta5 = -1.0;
  double center_x = 0.0;
  double center_y = 0.0;
  double axis_x = 0.0;
  double axis_y = 0.0;
  double residual_rms = 0.0;
  bool degenerate = false;
};

struct RobustConfig {
  double kappa = 0.1;           // Leclerc scale; smaller is more aggressive
  int max_iterations = 3;       // linear solves, counting the initial unweighted one
  double convergence_tol = 1e-4;  // stop when max relative theta change falls below
};

// Unweighted least squares on the squared coordinates.
// Throws degeneracy_error when the 2x2 normal system is singular or
// numerically unusable; merely non-elliptical solutions set `degenerate`.
EllipseFit2 fit_ls2(const LissajousCloud& cloud);

// Iteratively reweighted least squares with Leclerc weights
// w_i = exp(-2 kappa r_i^2). The first solve is unweighted.
EllipseFit2 fit_robust(const LissajousCloud& cloud, const RobustConfig& config = {});

// Four-parameter conic fit that also recovers the ellipse center.
EllipseFit5 fit_ls5(const LissajousCloud& cloud);

// Sum over the cloud of (1 - exp(-kappa r^2) / kappa) with r the conic
// residual; the quantity the reweighting descends.
double robust_objective(const LissajousCloud& cloud, double theta1, double theta2, double kappa);

std::string fit_to_json_text(const EllipseFit2& fit);
std::string fit_to_json_text(const EllipseFit5& fit);

}  // namespace fringe::ellipse
