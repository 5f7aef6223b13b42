#pragma once

#include <cstddef>
#include <vector>

// Core 2D grid types. Samples are double precision, row-major, (row, col)
// indexed. Fields reject non-finite samples on construction so every module
// downstream can assume finite data.
namespace fringe {

class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(int width, int height, double fill = 0.0);

  // Takes ownership of `samples`; length must equal width*height and every
  // value must be finite.
  static ScalarField from_samples(int width, int height, std::vector<double> samples);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }

  double at(int row, int col) const { return samples_[index(row, col)]; }
  double& at(int row, int col) { return samples_[index(row, col)]; }
  const double* data() const { return samples_.data(); }
  double* data() { return samples_.data(); }
  const double* row(int r) const { return samples_.data() + index(r, 0); }
  double* row(int r) { return samples_.data() + index(r, 0); }

  bool same_shape(const ScalarField& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  // Throws std::invalid_argument naming the first offending index. Public
  // operations that hand out mutable sample access call this before the data
  // escapes the module.
  void ensure_finite() const;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> samples_;
};

// Split-complex grid (separate re/im planes) so the SIMD kernels can run on
// contiguous doubles.
class ComplexField {
 public:
  ComplexField() = default;
  ComplexField(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return re_.size(); }
  bool empty() const { return re_.empty(); }

  double* re() { return re_.data(); }
  double* im() { return im_.data(); }
  const double* re() const { return re_.data(); }
  const double* im() const { return im_.data(); }

  ScalarField magnitude() const;
  // Principal-value argument atan2(im, re) per sample, in [-pi, pi].
  ScalarField angle() const;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> re_;
  std::vector<double> im_;
};

struct FieldStats {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double stddev = 0.0;
};

double field_mean(const ScalarField& f);
FieldStats field_stats(const ScalarField& f);

// Element-wise sums/differences; shapes must match.
ScalarField add(const ScalarField& a, const ScalarField& b);
ScalarField sub(const ScalarField& a, const ScalarField& b);
ScalarField scale_offset(const ScalarField& a, double scale, double offset);

// Reduces v to the half-open interval (-pi, pi], congruent modulo 2*pi.
double wrap_to_pi(double v);

}  // namespace fringe
