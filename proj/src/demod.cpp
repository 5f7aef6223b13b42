#include "fringe/demod.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fringe/errors.hpp"

namespace fringe::demod {
namespace {

constexpr double kTinyArgument = 1e-9;  // both atan2 inputs below this -> masked pixel

void check_step_domain(double delta) {
  if (!(delta > 0.0) || !(delta < std::numbers::pi)) {
    throw std::domain_error("demod: phase step " + std::to_string(delta) +
                            " outside (0, pi)");
  }
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::SlefLs: return "SLEF-LS";
    case Method::SlefRe: return "SLEF-RE";
    case Method::Lef5Term: return "LEF-5term";
  }
  throw std::invalid_argument("demod: unknown method id");
}

Method method_from_name(const std::string& name) {
  if (name == "SLEF-LS") return Method::SlefLs;
  if (name == "SLEF-RE") return Method::SlefRe;
  if (name == "LEF-5term") return Method::Lef5Term;
  throw std::invalid_argument("demod: unknown method \"" + name +
                              "\" (expected SLEF-LS, SLEF-RE, or LEF-5term)");
}

double step_from_thetas(double theta1, double theta2) {
  if (!(theta1 > 0.0) || !(theta2 > 0.0)) {
    throw degeneracy_error("demod: non-positive ellipse curvature, no step is recoverable");
  }
  return 2.0 * std::atan(std::sqrt(theta1 / theta2));
}

PhaseStepEstimate step_from_fit(const ellipse::EllipseFit2& fit, Method method) {
  if (fit.degenerate) {
    throw degeneracy_error("demod: degenerate ellipse fit, no step is recoverable");
  }
  PhaseStepEstimate est;
  est.delta = step_from_thetas(fit.theta1, fit.theta2);
  est.iterations = fit.iterations_used;
  est.residual_rms = fit.residual_rms;
  est.method = method;
  return est;
}

PhaseStepEstimate step_from_fit(const ellipse::EllipseFit5& fit) {
  if (fit.degenerate) {
    throw degeneracy_error("demod: degenerate ellipse fit, no step is recoverable");
  }
  PhaseStepEstimate est;
  est.delta = step_from_thetas(fit.theta1, fit.theta2);
  est.iterations = 1;
  est.residual_rms = fit.residual_rms;
  est.method = Method::Lef5Term;
  return est;
}

PhaseMapResult phase_two_step(const ScalarField& n1, const ScalarField& n2, double delta) {
  if (!n1.same_shape(n2)) throw std::invalid_argument("demod: frames differ in shape");
  check_step_domain(delta);
  const double cos_d = std::cos(delta);
  const double sin_d = std::sin(delta);

  PhaseMapResult out;
  out.phase = ScalarField(n1.width(), n1.height(), 0.0);
  out.valid.assign(n1.size(), 0);
  for (std::size_t i = 0; i < n1.size(); ++i) {
    const double num = n1.data()[i] * cos_d - n2.data()[i];
    const double den = n1.data()[i] * sin_d;
    if (std::abs(num) < kTinyArgument && std::abs(den) < kTinyArgument) continue;
    out.phase.data()[i] = wrap_to_pi(std::atan2(num, den));
    out.valid[i] = 1;
    ++out.valid_count;
  }
  return out;
}

PhaseMapResult phase_lef(const ScalarField& i_add, const ScalarField& i_sub,
                         const ellipse::EllipseFit5& fit, double delta) {
  if (!i_add.same_shape(i_sub)) throw std::invalid_argument("demod: frames differ in shape");
  check_step_domain(delta);
  if (fit.degenerate || !(fit.theta1 > 0.0) || !(fit.theta2 > 0.0)) {
    throw degeneracy_error("demod: degenerate ellipse fit, phase map undefined");
  }
  const double stretch = std::sqrt(fit.theta2 / fit.theta1);
  const double recenter = fit.theta3 / (2.0 * fit.theta1);
  const double half_step = 0.5 * delta;

  PhaseMapResult out;
  out.phase = ScalarField(i_add.width(), i_add.height(), 0.0);
  out.valid.assign(i_add.size(), 0);
  for (std::size_t i = 0; i < i_add.size(); ++i) {
    const double num = i_sub.data()[i] * stretch;
    const double den = i_add.data()[i] + recenter;
    if (std::abs(num) < kTinyArgument && std::abs(den) < kTinyArgument) continue;
    // Principal branch on purpose: the ratio discards the quadrant, which is
    // exactly the fold defect this baseline exhibits.
    out.phase.data()[i] = wrap_to_pi(std::atan(num / den) - half_step);
    out.valid[i] = 1;
    ++out.valid_count;
  }
  return out;
}

void mask_border(PhaseMapResult& result, int crop) {
  if (crop < 0) throw std::invalid_argument("demod: border crop must be >= 0");
  if (crop == 0) return;
  const int w = result.phase.width();
  const int h = result.phase.height();
  for (int r = 0; r < h; ++r) {
    const bool edge_row = r < crop || r >= h - crop;
    for (int c = 0; c < w; ++c) {
      if (!edge_row && c >= crop && c < w - crop) continue;
      const std::size_t i = static_cast<std::size_t>(r) * w + c;
      if (result.valid[i]) {
        result.valid[i] = 0;
        result.phase.data()[i] = 0.0;
      }
    }
  }
  std::size_t count = 0;
  for (std::uint8_t v : result.valid) count += v;
  result.valid_count = count;
}

ErrorReport wrapped_error(const PhaseMapResult& estimate, const ScalarField& truth,
                          bool remove_piston) {
  if (!estimate.phase.same_shape(truth)) {
    throw std::invalid_argument("demod: truth differs in shape from the estimate");
  }
  if (estimate.valid_count == 0) {
    throw data_error("demod: every pixel is masked, nothing to score");
  }

  ErrorReport report;
  if (remove_piston) {
    // Circular mean keeps the piston well-defined when raw errors straddle
    // the +-pi seam.
    double s = 0.0;
    double c = 0.0;
    for (std::size_t i = 0; i < estimate.valid.size(); ++i) {
      if (!estimate.valid[i]) continue;
      const double raw = estimate.phase.data()[i] - truth.data()[i];
      s += std::sin(raw);
      c += std::cos(raw);
    }
    report.piston = std::atan2(s, c);
  }

  report.error_map = ScalarField(truth.width(), truth.height(), 0.0);
  double abs_sum = 0.0;
  for (std::size_t i = 0; i < estimate.valid.size(); ++i) {
    if (!estimate.valid[i]) continue;
    const double err = wrap_to_pi(estimate.phase.data()[i] - truth.data()[i] - report.piston);
    report.error_map.data()[i] = err;
    abs_sum += std::abs(err);
  }
  report.mae = abs_sum / static_cast<double>(estimate.valid_count);
  report.excluded_fraction = 1.0 - static_cast<double>(estimate.valid_count) /
                                       static_cast<double>(estimate.valid.size());
  return report;
}

}  // namespace fringe::demod
