#include "fringe/field.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fringe/kernels.hpp"

namespace fringe {
namespace {

void check_shape(int width, int height) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("field: dimensions must be at least 1x1, got " +
                                std::to_string(width) + "x" + std::to_string(height));
  }
}

void check_same_shape(const ScalarField& a, const ScalarField& b, const char* op) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument(std::string("field: ") + op + " requires equal shapes, got " +
                                std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                                " vs " + std::to_string(b.width()) + "x" +
                                std::to_string(b.height()));
  }
}

}  // namespace

ScalarField::ScalarField(int width, int height, double fill)
    : width_(width), height_(height) {
  check_shape(width, height);
  if (!std::isfinite(fill)) throw std::invalid_argument("field: non-finite fill value");
  samples_.assign(static_cast<std::size_t>(width) * height, fill);
}

ScalarField ScalarField::from_samples(int width, int height, std::vector<double> samples) {
  check_shape(width, height);
  if (samples.size() != static_cast<std::size_t>(width) * height) {
    throw std::invalid_argument("field: sample count " + std::to_string(samples.size()) +
                                " does not match " + std::to_string(width) + "x" +
                                std::to_string(height));
  }
  ScalarField f;
  f.width_ = width;
  f.height_ = height;
  f.samples_ = std::move(samples);
  f.ensure_finite();
  return f;
}

void ScalarField::ensure_finite() const {
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) {
      throw std::invalid_argument("field: non-finite sample at index " + std::to_string(i));
    }
  }
}

ComplexField::ComplexField(int width, int height) : width_(width), height_(height) {
  check_shape(width, height);
  const std::size_t n = static_cast<std::size_t>(width) * height;
  re_.assign(n, 0.0);
  im_.assign(n, 0.0);
}

ScalarField ComplexField::magnitude() const {
  std::vector<double> out(re_.size());
  kernels::magnitude(re_.data(), im_.data(), out.data(), out.size());
  return ScalarField::from_samples(width_, height_, std::move(out));
}

ScalarField ComplexField::angle() const {
  std::vector<double> out(re_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::atan2(im_[i], re_[i]);
  return ScalarField::from_samples(width_, height_, std::move(out));
}

double field_mean(const ScalarField& f) {
  if (f.empty()) throw std::invalid_argument("field: mean of empty field");
  return kernels::sum(f.data(), f.size()) / static_cast<double>(f.size());
}

FieldStats field_stats(const ScalarField& f) {
  if (f.empty()) throw std::invalid_argument("field: stats of empty field");
  FieldStats s;
  s.mean = field_mean(f);
  kernels::minmax(f.data(), f.size(), s.min, s.max);
  double sq = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = f.data()[i] - s.mean;
    sq += d * d;
  }
  s.stddev = std::sqrt(sq / static_cast<double>(f.size()));
  return s;
}

ScalarField add(const ScalarField& a, const ScalarField& b) {
  check_same_shape(a, b, "add");
  std::vector<double> out(a.size());
  kernels::add(a.data(), b.data(), out.data(), out.size());
  return ScalarField::from_samples(a.width(), a.height(), std::move(out));
}

ScalarField sub(const ScalarField& a, const ScalarField& b) {
  check_same_shape(a, b, "sub");
  std::vector<double> out(a.size());
  kernels::sub(a.data(), b.data(), out.data(), out.size());
  return ScalarField::from_samples(a.width(), a.height(), std::move(out));
}

ScalarField scale_offset(const ScalarField& a, double scale, double offset) {
  std::vector<double> out(a.size());
  kernels::scale_offset(a.data(), scale, offset, out.data(), out.size());
  return ScalarField::from_samples(a.width(), a.height(), std::move(out));
}

double wrap_to_pi(double v) {
  constexpr double pi = std::numbers::pi;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double k = std::ceil((v - pi) / two_pi);
  double w = v - two_pi * k;
  // Rounding at the interval ends can land exactly outside (-pi, pi].
  if (w > pi) w -= two_pi;
  if (w <= -pi) w += two_pi;
  return w;
}

}  // namespace fringe
