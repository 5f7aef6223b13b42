#include "fringe/ellipse.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

#include "fringe/errors.hpp"
#include "fringe/kernels.hpp"

namespace fringe::ellipse {
namespace {

constexpr std::size_t kMinSamples = 8;
constexpr double kConditionLimit = 1e12;

void check_cloud(const LissajousCloud& cloud) {
  if (cloud.x.size() != cloud.y.size()) {
    throw std::invalid_argument("ellipse: cloud coordinate arrays differ in length");
  }
  if (cloud.count() < kMinSamples) {
    throw degeneracy_error("ellipse: need at least " + std::to_string(kMinSamples) +
                           " samples, got " + std::to_string(cloud.count()));
  }
}

// Solves [suu suv; suv svv] theta = [su; sv]. The matrix is the Gram matrix
// of the squared coordinates, so it is symmetric positive semidefinite;
// rank loss means the cloud collapsed onto a degenerate curve.
std::pair<double, double> solve_moments(const kernels::EllipseMoments& m, const char* what) {
  const double tr = m.suu + m.svv;
  const double det = m.suu * m.svv - m.suv * m.suv;
  const double gap = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
  const double lo = 0.5 * (tr - gap);
  const double hi = 0.5 * (tr + gap);
  if (!(lo > 0.0) || hi > kConditionLimit * lo) {
    throw degeneracy_error(std::string("ellipse: ") + what +
                           ": moment system is singular or ill-conditioned");
  }
  return {(m.su * m.svv - m.sv * m.suv) / det, (m.suu * m.sv - m.suv * m.su) / det};
}

double residual_rms_from_moments(const kernels::EllipseMoments& m, double t1, double t2,
                                 std::size_t n) {
  // sum r^2 expanded through the same power sums the solver consumes.
  const double ss = t1 * t1 * m.suu + 2.0 * t1 * t2 * m.suv + t2 * t2 * m.svv -
                    2.0 * t1 * m.su - 2.0 * t2 * m.sv + static_cast<double>(n);
  return std::sqrt(std::max(0.0, ss / static_cast<double>(n)));
}

}  // namespace

LissajousCloud build_cloud(const ScalarField& n1, const ScalarField& n2, int stride,
                           int border_crop) {
  if (!n1.same_shape(n2)) throw std::invalid_argument("ellipse: frames differ in shape");
  if (stride < 1) throw std::invalid_argument("ellipse: stride must be >= 1");
  if (border_crop < 0) throw std::invalid_argument("ellipse: border crop must be >= 0");

  LissajousCloud cloud;
  for (int r = border_crop; r < n1.height() - border_crop; r += stride) {
    for (int c = border_crop; c < n1.width() - border_crop; c += stride) {
      cloud.x.push_back(n1.at(r, c) + n2.at(r, c));
      cloud.y.push_back(n1.at(r, c) - n2.at(r, c));
    }
  }
  if (cloud.count() < kMinSamples) {
    throw degeneracy_error("ellipse: stride/crop leave " + std::to_string(cloud.count()) +
                           " samples, need at least " + std::to_string(kMinSamples));
  }
  const double n = static_cast<double>(cloud.count());
  cloud.mean_x = kernels::sum(cloud.x.data(), cloud.count()) / n;
  cloud.mean_y = kernels::sum(cloud.y.data(), cloud.count()) / n;
  kernels::scale_offset(cloud.x.data(), 1.0, -cloud.mean_x, cloud.x.data(), cloud.count());
  kernels::scale_offset(cloud.y.data(), 1.0, -cloud.mean_y, cloud.y.data(), cloud.count());
  return cloud;
}

LissajousCloud cloud_from_points(std::vector<double> x, std::vector<double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("ellipse: coordinate arrays differ in length");
  }
  return {std::move(x), std::move(y)};
}

EllipseFit2 fit_ls2(const LissajousCloud& cloud) {
  check_cloud(cloud);
  const kernels::EllipseMoments m = kernels::ellipse_moments(cloud.x.data(), cloud.y.data(),
                                                             cloud.count());
  EllipseFit2 fit;
  std::tie(fit.theta1, fit.theta2) = solve_moments(m, "least squares");
  fit.residual_rms = residual_rms_from_moments(m, fit.theta1, fit.theta2, cloud.count());
  fit.iterations_used = 1;
  fit.degenerate = !(fit.theta1 > 0.0 && fit.theta2 > 0.0);
  return fit;
}

EllipseFit2 fit_robust(const LissajousCloud& cloud, const RobustConfig& config) {
  check_cloud(cloud);
  if (!(config.kappa > 0.0)) throw std::invalid_argument("ellipse: kappa must be > 0");
  if (config.max_iterations < 1) {
    throw std::invalid_argument("ellipse: need at least one iteration");
  }
  if (!(config.convergence_tol > 0.0)) {
    throw std::invalid_argument("ellipse: convergence tolerance must be > 0");
  }

  const std::size_t n = cloud.count();
  const kernels::EllipseMoments plain = kernels::ellipse_moments(cloud.x.data(), cloud.y.data(),
                                                                 n);
  EllipseFit2 fit;
  std::tie(fit.theta1, fit.theta2) = solve_moments(plain, "robust fit");
  fit.iterations_used = 1;
  fit.objective_trace.push_back(
      robust_objective(cloud, fit.theta1, fit.theta2, 2.0 * config.kappa));

  std::vector<double> w(n);
  for (int pass = 1; pass < config.max_iterations; ++pass) {
    for (std::size_t i = 0; i < n; ++i) {
      const double r = fit.theta1 * cloud.x[i] * cloud.x[i] +
                       fit.theta2 * cloud.y[i] * cloud.y[i] - 1.0;
      w[i] = std::exp(-2.0 * config.kappa * r * r);
    }
    const kernels::EllipseMoments wm = kernels::ellipse_moments_weighted(cloud.x.data(),
                                                                         cloud.y.data(), w.data(),
                                                                         n);
    double t1;
    double t2;
    try {
      std::tie(t1, t2) = solve_moments(wm, "robust fit");
    } catch (const degeneracy_error&) {
      throw degeneracy_error(
          "ellipse: robust reweighting collapsed the sample support; try a larger kappa");
    }
    const double change = std::max(
        std::abs(t1 - fit.theta1) / std::max(std::abs(fit.theta1), 1e-300),
        std::abs(t2 - fit.theta2) / std::max(std::abs(fit.theta2), 1e-300));
    fit.theta1 = t1;
    fit.theta2 = t2;
    ++fit.iterations_used;
    fit.objective_trace.push_back(
        robust_objective(cloud, fit.theta1, fit.theta2, 2.0 * config.kappa));
    if (change < config.convergence_tol) break;
  }

  fit.residual_rms = residual_rms_from_moments(plain, fit.theta1, fit.theta2, n);
  fit.degenerate = !(fit.theta1 > 0.0 && fit.theta2 > 0.0);
  return fit;
}

EllipseFit5 fit_ls5(const LissajousCloud& cloud) {
  check_cloud(cloud);
  const std::size_t n = cloud.count();

  // Normal equations for regressing [x^2, y^2, x, y] onto 1.
  std::array<std::array<double, 4>, 4> m{};
  std::array<double, 4> b{};
  for (std::size_t i = 0; i < n; ++i) {
    const double x = cloud.x[i];
    const double y = cloud.y[i];
    const std::array<double, 4> row{x * x, y * y, x, y};
    for (int p = 0; p < 4; ++p) {
      for (int q = p; q < 4; ++q) m[p][q] += row[p] * row[q];
      b[p] += row[p];
    }
  }
  for (int p = 1; p < 4; ++p) {
    for (int q = 0; q < p; ++q) m[p][q] = m[q][p];
  }

  double max_abs = 0.0;
  for (const auto& row : m) {
    for (double v : row) max_abs = std::max(max_abs, std::abs(v));
  }

  // Gaussian elimination with partial pivoting on the 4x4 system.
  std::array<int, 4> perm{0, 1, 2, 3};
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r) {
      if (std::abs(m[perm[r]][col]) > std::abs(m[perm[pivot]][col])) pivot = r;
    }
    std::swap(perm[col], perm[pivot]);
    const double diag = m[perm[col]][col];
    if (std::abs(diag) < 1e-12 * max_abs) {
      throw degeneracy_error("ellipse: five-term system is singular, cloud spans no ellipse");
    }
    for (int r = col + 1; r < 4; ++r) {
      const double f = m[perm[r]][col] / diag;
      for (int q = col; q < 4; ++q) m[perm[r]][q] -= f * m[perm[col]][q];
      b[perm[r]] -= f * b[perm[col]];
    }
  }
  std::array<double, 4> theta{};
  for (int col = 3; col >= 0; --col) {
    double v = b[perm[col]];
    for (int q = col + 1; q < 4; ++q) v -= m[perm[col]][q] * theta[q];
    theta[col] = v / m[perm[col]][col];
  }

  EllipseFit5 fit;
  fit.theta1 = theta[0];
  fit.theta2 = theta[1];
  fit.theta3 = theta[2];
  fit.theta4 = theta[3];
  fit.theta5 = -1.0;

  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = fit.theta1 * cloud.x[i] * cloud.x[i] + fit.theta2 * cloud.y[i] * cloud.y[i] +
                     fit.theta3 * cloud.x[i] + fit.theta4 * cloud.y[i] - 1.0;
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / static_cast<double>(n));

  if (fit.theta1 != 0.0 && fit.theta2 != 0.0) {
    fit.center_x = -fit.theta3 / (2.0 * fit.theta1);
    fit.center_y = -fit.theta4 / (2.0 * fit.theta2);
    const double radius = 1.0 + fit.theta3 * fit.theta3 / (4.0 * fit.theta1) +
                          fit.theta4 * fit.theta4 / (4.0 * fit.theta2);
    if (fit.theta1 > 0.0 && fit.theta2 > 0.0 && radius > 0.0) {
      fit.axis_x = std::sqrt(radius / fit.theta1);
      fit.axis_y = std::sqrt(radius / fit.theta2);
    } else {
      fit.degenerate = true;
    }
  } else {
    fit.degenerate = true;
  }
  return fit;
}

double robust_objective(const LissajousCloud& cloud, double theta1, double theta2, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("ellipse: kappa must be > 0");
  double total = 0.0;
  for (std::size_t i = 0; i < cloud.count(); ++i) {
    const double r = theta1 * cloud.x[i] * cloud.x[i] + theta2 * cloud.y[i] * cloud.y[i] - 1.0;
    total += (1.0 - std::exp(-kappa * r * r)) / kappa;
  }
  return total;
}

std::string fit_to_json_text(const EllipseFit2& fit) {
  nlohmann::json j;
  j["theta"] = {fit.theta1, fit.theta2};
  j["residual_rms"] = fit.residual_rms;
  j["iterations"] = fit.iterations_used;
  j["degenerate_flag"] = fit.degenerate;
  if (!fit.objective_trace.empty()) j["objective_trace"] = fit.objective_trace;
  return j.dump(2) + "\n";
}

std::string fit_to_json_text(const EllipseFit5& fit) {
  nlohmann::json j;
  j["theta"] = {fit.theta1, fit.theta2, fit.theta3, fit.theta4, fit.theta5};
  j["center"] = {fit.center_x, fit.center_y};
  j["axes"] = {fit.axis_x, fit.axis_y};
  j["residual_rms"] = fit.residual_rms;
  j["degenerate_flag"] = fit.degenerate;
  return j.dump(2) + "\n";
}

}  // namespace fringe::ellipse
