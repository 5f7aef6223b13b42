#include <cmath>
#include <cstddef>
#include <cstdint>

#include "backend.hpp"

// Reference implementations. The element-wise loops are written with the
// exact same operation order as the AVX2 variants so the two backends agree
// bit-for-bit; reductions keep a single sequential accumulator.
namespace fringe::kernels::detail {
namespace {

void add_scalar(const double* a, const double* b, double* dst, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] + b[i];
}

void sub_scalar(const double* a, const double* b, double* dst, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] - b[i];
}

void scale_offset_scalar(const double* a, double scale, double offset, double* dst,
                         std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] * scale + offset;
}

void lerp_scalar(const double* a, const double* b, const double* w, double* dst, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = w[i] * a[i] + (1.0 - w[i]) * b[i];
}

void magnitude_scalar(const double* re, const double* im, double* dst, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = std::sqrt(re[i] * re[i] + im[i] * im[i]);
}

void cosine_from_complex_scalar(const double* re, const double* im, double* dst, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double m = std::sqrt(re[i] * re[i] + im[i] * im[i]);
    if (m > 0.0) {
      double q = re[i] / m;
      q = q < -1.0 ? -1.0 : q;
      q = q > 1.0 ? 1.0 : q;
      dst[i] = q;
    } else {
      dst[i] = 1.0;
    }
  }
}

void wta_update_scalar(const double* mag, const double* re, const double* im,
                       std::int32_t candidate, double* best_mag, double* best_re, double* best_im,
                       std::int32_t* best_idx, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (mag[i] > best_mag[i]) {
      best_mag[i] = mag[i];
      best_re[i] = re[i];
      best_im[i] = im[i];
      best_idx[i] = candidate;
    }
  }
}

double sum_scalar(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double sum_abs_scalar(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(a[i]);
  return acc;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void dot2_scalar(const double* a, const double* bre, const double* bim, std::size_t n,
                 double& out_re, double& out_im) {
  double acc_re = 0.0;
  double acc_im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc_re += a[i] * bre[i];
    acc_im += a[i] * bim[i];
  }
  out_re = acc_re;
  out_im = acc_im;
}

void minmax_scalar(const double* a, std::size_t n, double& mn, double& mx) {
  double lo = a[0];
  double hi = a[0];
  for (std::size_t i = 1; i < n; ++i) {
    lo = a[i] < lo ? a[i] : lo;
    hi = a[i] > hi ? a[i] : hi;
  }
  mn = lo;
  mx = hi;
}

EllipseMoments ellipse_moments_scalar(const double* x, const double* y, std::size_t n) {
  EllipseMoments m;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = x[i] * x[i];
    const double v = y[i] * y[i];
    m.suu += u * u;
    m.suv += u * v;
    m.svv += v * v;
    m.su += u;
    m.sv += v;
  }
  return m;
}

EllipseMoments ellipse_moments_weighted_scalar(const double* x, const double* y, const double* w,
                                               std::size_t n) {
  EllipseMoments m;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = x[i] * x[i];
    const double v = y[i] * y[i];
    const double wi = w[i];
    m.suu += wi * (u * u);
    m.suv += wi * (u * v);
    m.svv += wi * (v * v);
    m.su += wi * u;
    m.sv += wi * v;
  }
  return m;
}

}  // namespace

const OpsTable& scalar_table() {
  static const OpsTable table = {
      add_scalar,
      sub_scalar,
      scale_offset_scalar,
      lerp_scalar,
      magnitude_scalar,
      cosine_from_complex_scalar,
      wta_update_scalar,
      sum_scalar,
      sum_abs_scalar,
      dot_scalar,
      dot2_scalar,
      minmax_scalar,
      ellipse_moments_scalar,
      ellipse_moments_weighted_scalar,
  };
  return table;
}

}  // namespace fringe::kernels::detail
