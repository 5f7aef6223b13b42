#include <atomic>
#include <stdexcept>
#include <string_view>

#include "backend.hpp"
#include "fringe/kernels.hpp"

namespace fringe::kernels {
namespace {

struct Active {
  const detail::OpsTable* ops;
  Backend which;
};

Active resolve(Backend b) {
#if defined(FRINGE_HAVE_AVX2)
  const bool have_avx2 = avx2_supported();
#else
  const bool have_avx2 = false;
#endif
  switch (b) {
    case Backend::Auto:
#if defined(FRINGE_HAVE_AVX2)
      if (have_avx2) return {&detail::avx2_table(), Backend::Avx2};
#endif
      return {&detail::scalar_table(), Backend::Scalar};
    case Backend::Scalar:
      return {&detail::scalar_table(), Backend::Scalar};
    case Backend::Avx2:
#if defined(FRINGE_HAVE_AVX2)
      if (have_avx2) return {&detail::avx2_table(), Backend::Avx2};
#endif
      throw std::invalid_argument("kernels: AVX2 backend not available on this machine");
  }
  throw std::invalid_argument("kernels: unknown backend");
}

Active& active() {
  static Active a = resolve(Backend::Auto);
  return a;
}

}  // namespace

bool avx2_supported() {
#if defined(FRINGE_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

void set_backend(Backend b) { active() = resolve(b); }

Backend active_backend() { return active().which; }

std::string_view backend_name() {
  return active().which == Backend::Avx2 ? "avx2" : "scalar";
}

void add(const double* a, const double* b, double* dst, std::size_t n) {
  active().ops->add(a, b, dst, n);
}

void sub(const double* a, const double* b, double* dst, std::size_t n) {
  active().ops->sub(a, b, dst, n);
}

void scale_offset(const double* a, double scale, double offset, double* dst, std::size_t n) {
  active().ops->scale_offset(a, scale, offset, dst, n);
}

void lerp(const double* a, const double* b, const double* w, double* dst, std::size_t n) {
  active().ops->lerp(a, b, w, dst, n);
}

void magnitude(const double* re, const double* im, double* dst, std::size_t n) {
  active().ops->magnitude(re, im, dst, n);
}

void cosine_from_complex(const double* re, const double* im, double* dst, std::size_t n) {
  active().ops->cosine_from_complex(re, im, dst, n);
}

void wta_update(const double* mag, const double* re, const double* im, std::int32_t candidate,
                double* best_mag, double* best_re, double* best_im, std::int32_t* best_idx,
                std::size_t n) {
  active().ops->wta_update(mag, re, im, candidate, best_mag, best_re, best_im, best_idx, n);
}

double sum(const double* a, std::size_t n) { return active().ops->sum(a, n); }

double sum_abs(const double* a, std::size_t n) { return active().ops->sum_abs(a, n); }

double dot(const double* a, const double* b, std::size_t n) { return active().ops->dot(a, b, n); }

void dot2(const double* a, const double* bre, const double* bim, std::size_t n, double& out_re,
          double& out_im) {
  active().ops->dot2(a, bre, bim, n, out_re, out_im);
}

void minmax(const double* a, std::size_t n, double& mn, double& mx) {
  active().ops->minmax(a, n, mn, mx);
}

EllipseMoments ellipse_moments(const double* x, const double* y, std::size_t n) {
  return active().ops->ellipse_moments(x, y, n);
}

EllipseMoments ellipse_moments_weighted(const double* x, const double* y, const double* w,
                                        std::size_t n) {
  return active().ops->ellipse_moments_weighted(x, y, w, n);
}

}  // namespace fringe::kernels
