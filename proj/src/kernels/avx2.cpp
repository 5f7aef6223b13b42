#if defined(FRINGE_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "backend.hpp"

// AVX2 variants. Element-wise kernels use the same operation order as the
// scalar backend and avoid FMA, so results are bit-identical. Reductions use
// four independent lanes folded with a fixed tree; they agree with the scalar
// backend only up to rounding, which the equivalence tests account for.
namespace fringe::kernels::detail {
namespace {

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  const __m128d sh = _mm_unpackhi_pd(s, s);
  return _mm_cvtsd_f64(_mm_add_sd(s, sh));
}

void add_avx2(const double* a, const double* b, double* dst, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) dst[i] = a[i] + b[i];
}

void sub_avx2(const double* a, const double* b, double* dst, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(dst + i, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) dst[i] = a[i] - b[i];
}

void scale_offset_avx2(const double* a, double scale, double offset, double* dst, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(scale);
  const __m256d vo = _mm256_set1_pd(offset);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_mul_pd(_mm256_loadu_pd(a + i), vs), vo));
  }
  for (; i < n; ++i) dst[i] = a[i] * scale + offset;
}

void lerp_avx2(const double* a, const double* b, const double* w, double* dst, std::size_t n) {
  const __m256d ones = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vw = _mm256_loadu_pd(w + i);
    const __m256d left = _mm256_mul_pd(vw, _mm256_loadu_pd(a + i));
    const __m256d right = _mm256_mul_pd(_mm256_sub_pd(ones, vw), _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(dst + i, _mm256_add_pd(left, right));
  }
  for (; i < n; ++i) dst[i] = w[i] * a[i] + (1.0 - w[i]) * b[i];
}

void magnitude_avx2(const double* re, const double* im, double* dst, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_loadu_pd(re + i);
    const __m256d m = _mm256_loadu_pd(im + i);
    _mm256_storeu_pd(dst + i,
                     _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(r, r), _mm256_mul_pd(m, m))));
  }
  for (; i < n; ++i) dst[i] = std::sqrt(re[i] * re[i] + im[i] * im[i]);
}

void cosine_from_complex_avx2(const double* re, const double* im, double* dst, std::size_t n) {
  const __m256d zeros = _mm256_setzero_pd();
  const __m256d ones = _mm256_set1_pd(1.0);
  const __m256d neg_ones = _mm256_set1_pd(-1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_loadu_pd(re + i);
    const __m256d m = _mm256_loadu_pd(im + i);
    const __m256d mag =
        _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(r, r), _mm256_mul_pd(m, m)));
    const __m256d pick = _mm256_cmp_pd(mag, zeros, _CMP_GT_OQ);
    // Zero-magnitude lanes divide by zero; the blend discards them.
    __m256d q = _mm256_div_pd(r, mag);
    q = _mm256_min_pd(_mm256_max_pd(q, neg_ones), ones);
    _mm256_storeu_pd(dst + i, _mm256_blendv_pd(ones, q, pick));
  }
  for (; i < n; ++i) {
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

void wta_update_avx2(const double* mag, const double* re, const double* im, std::int32_t candidate,
                     double* best_mag, double* best_re, double* best_im, std::int32_t* best_idx,
                     std::size_t n) {
  const __m128i vcand = _mm_set1_epi32(candidate);
  const __m256i lane_lo = _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d m = _mm256_loadu_pd(mag + i);
    const __m256d bm = _mm256_loadu_pd(best_mag + i);
    const __m256d pick = _mm256_cmp_pd(m, bm, _CMP_GT_OQ);
    _mm256_storeu_pd(best_mag + i, _mm256_blendv_pd(bm, m, pick));
    _mm256_storeu_pd(best_re + i, _mm256_blendv_pd(_mm256_loadu_pd(best_re + i),
                                                   _mm256_loadu_pd(re + i), pick));
    _mm256_storeu_pd(best_im + i, _mm256_blendv_pd(_mm256_loadu_pd(best_im + i),
                                                   _mm256_loadu_pd(im + i), pick));
    const __m256i mask64 = _mm256_castpd_si256(pick);
    const __m128i mask32 = _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(mask64, lane_lo));
    const __m128i bi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(best_idx + i));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(best_idx + i),
                     _mm_blendv_epi8(bi, vcand, mask32));
  }
  for (; i < n; ++i) {
    if (mag[i] > best_mag[i]) {
      best_mag[i] = mag[i];
      best_re[i] = re[i];
      best_im[i] = im[i];
      best_idx[i] = candidate;
    }
  }
}

double sum_avx2(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  double total = hsum(acc);
  for (; i < n; ++i) total += a[i];
  return total;
}

double sum_abs_avx2(const double* a, std::size_t n) {
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_and_pd(_mm256_loadu_pd(a + i), abs_mask));
  }
  double total = hsum(acc);
  for (; i < n; ++i) total += std::fabs(a[i]);
  return total;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  double total = hsum(acc);
  for (; i < n; ++i) total += a[i] * b[i];
  return total;
}

void dot2_avx2(const double* a, const double* bre, const double* bim, std::size_t n,
               double& out_re, double& out_im) {
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va = _mm256_loadu_pd(a + i);
    acc_re = _mm256_add_pd(acc_re, _mm256_mul_pd(va, _mm256_loadu_pd(bre + i)));
    acc_im = _mm256_add_pd(acc_im, _mm256_mul_pd(va, _mm256_loadu_pd(bim + i)));
  }
  double total_re = hsum(acc_re);
  double total_im = hsum(acc_im);
  for (; i < n; ++i) {
    total_re += a[i] * bre[i];
    total_im += a[i] * bim[i];
  }
  out_re = total_re;
  out_im = total_im;
}

void minmax_avx2(const double* a, std::size_t n, double& mn, double& mx) {
  double lo = a[0];
  double hi = a[0];
  std::size_t i = 0;
  if (n >= 4) {
    __m256d vlo = _mm256_loadu_pd(a);
    __m256d vhi = vlo;
    for (i = 4; i + 4 <= n; i += 4) {
      const __m256d v = _mm256_loadu_pd(a + i);
      vlo = _mm256_min_pd(vlo, v);
      vhi = _mm256_max_pd(vhi, v);
    }
    alignas(32) double buf[4];
    _mm256_store_pd(buf, vlo);
    lo = buf[0];
    for (int k = 1; k < 4; ++k) lo = buf[k] < lo ? buf[k] : lo;
    _mm256_store_pd(buf, vhi);
    hi = buf[0];
    for (int k = 1; k < 4; ++k) hi = buf[k] > hi ? buf[k] : hi;
  }
  for (; i < n; ++i) {
    lo = a[i] < lo ? a[i] : lo;
    hi = a[i] > hi ? a[i] : hi;
  }
  mn = lo;
  mx = hi;
}

EllipseMoments ellipse_moments_avx2(const double* x, const double* y, std::size_t n) {
  __m256d suu = _mm256_setzero_pd();
  __m256d suv = _mm256_setzero_pd();
  __m256d svv = _mm256_setzero_pd();
  __m256d su = _mm256_setzero_pd();
  __m256d sv = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d vy = _mm256_loadu_pd(y + i);
    const __m256d u = _mm256_mul_pd(vx, vx);
    const __m256d v = _mm256_mul_pd(vy, vy);
    suu = _mm256_add_pd(suu, _mm256_mul_pd(u, u));
    suv = _mm256_add_pd(suv, _mm256_mul_pd(u, v));
    svv = _mm256_add_pd(svv, _mm256_mul_pd(v, v));
    su = _mm256_add_pd(su, u);
    sv = _mm256_add_pd(sv, v);
  }
  EllipseMoments m;
  m.suu = hsum(suu);
  m.suv = hsum(suv);
  m.svv = hsum(svv);
  m.su = hsum(su);
  m.sv = hsum(sv);
  for (; i < n; ++i) {
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

EllipseMoments ellipse_moments_weighted_avx2(const double* x, const double* y, const double* w,
                                             std::size_t n) {
  __m256d suu = _mm256_setzero_pd();
  __m256d suv = _mm256_setzero_pd();
  __m256d svv = _mm256_setzero_pd();
  __m256d su = _mm256_setzero_pd();
  __m256d sv = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d vy = _mm256_loadu_pd(y + i);
    const __m256d vw = _mm256_loadu_pd(w + i);
    const __m256d u = _mm256_mul_pd(vx, vx);
    const __m256d v = _mm256_mul_pd(vy, vy);
    suu = _mm256_add_pd(suu, _mm256_mul_pd(vw, _mm256_mul_pd(u, u)));
    suv = _mm256_add_pd(suv, _mm256_mul_pd(vw, _mm256_mul_pd(u, v)));
    svv = _mm256_add_pd(svv, _mm256_mul_pd(vw, _mm256_mul_pd(v, v)));
    su = _mm256_add_pd(su, _mm256_mul_pd(vw, u));
    sv = _mm256_add_pd(sv, _mm256_mul_pd(vw, v));
  }
  EllipseMoments m;
  m.suu = hsum(suu);
  m.suv = hsum(suv);
  m.svv = hsum(svv);
  m.su = hsum(su);
  m.sv = hsum(sv);
  for (; i < n; ++i) {
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

const OpsTable& avx2_table() {
  static const OpsTable table = {
      add_avx2,
      sub_avx2,
      scale_offset_avx2,
      lerp_avx2,
      magnitude_avx2,
      cosine_from_complex_avx2,
      wta_update_avx2,
      sum_avx2,
      sum_abs_avx2,
      dot_avx2,
      dot2_avx2,
      minmax_avx2,
      ellipse_moments_avx2,
      ellipse_moments_weighted_avx2,
  };
  return table;
}

}  // namespace fringe::kernels::detail

#endif  // FRINGE_HAVE_AVX2
