#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fringe/ellipse.hpp"
#include "fringe/field.hpp"

namespace fringe::demod {

enum class Method {
  SlefLs,    // two-term least-squares ellipse fit
  SlefRe,    // two-term robust (Leclerc reweighted) ellipse fit
  Lef5Term,  // five-term conic fit with explicit center
};

const char* method_name(Method m);
Method method_from_name(const std::string& name);  // throws std::invalid_argument

struct PhaseStepEstimate {
  double delta = 0.0;
  int iterations = 1;
  double residual_rms = 0.0;
  Method method = Method::SlefLs;
};

// delta = 2 atan(sqrt(theta1 / theta2)); requires both curvatures positive.
double step_from_thetas(double theta1, double theta2);
PhaseStepEstimate step_from_fit(const ellipse::EllipseFit2& fit, Method method);
PhaseStepEstimate step_from_fit(const ellipse::EllipseFit5& fit);

struct PhaseMapResult {
  ScalarField phase;
  std::vector<std::uint8_t> valid;  // 1 where the estimate is defined
  std::size_t valid_count = 0;
};

// Direct two-frame demodulation at a known step:
// phase = atan2(n1 cos(delta) - n2, n1 sin(delta)).
// Pixels where both atan2 arguments are below 1e-9 in magnitude are masked.
PhaseMapResult phase_two_step(const ScalarField& n1, const ScalarField& n2, double delta);

// Ellipse-coordinate demodulation via the principal branch of the single
// argument arctangent:
// phase = atan[(y sqrt(theta2/theta1)) / (x + theta3/(2 theta1))] - delta/2.
// The principal branch folds half of each fringe period by pi, so this map
// carries sign-flip artifacts wherever the true phase leaves (-pi/2, pi/2);
// it exists as the fold-prone baseline the two-step map is compared against.
PhaseMapResult phase_lef(const ScalarField& i_add, const ScalarField& i_sub,
                         const ellipse::EllipseFit5& fit, double delta);

// Marks a border of `crop` pixels invalid on all four sides.
void mask_border(PhaseMapResult& result, int crop);

struct ErrorReport {
  ScalarField error_map;     // wrapped difference, 0 on masked pixels
  double mae = 0.0;          // mean |wrapped error| over unmasked pixels
  double piston = 0.0;       // circular mean removed before scoring (0 if kept)
  double excluded_fraction = 0.0;
};

// Wrapped difference against the ground-truth phase. With piston removal the
// circular mean of the raw wrapped error is subtracted first, since a global
// phase offset is unobservable from two frames.
ErrorReport wrapped_error(const PhaseMapResult& estimate, const ScalarField& truth,
                          bool remove_piston);

}  // namespace fringe::demod
