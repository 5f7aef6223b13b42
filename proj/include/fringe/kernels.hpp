#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Data-parallel primitives behind the image and fitting code. Every op has a
// scalar reference implementation and, on x86-64, an AVX2 variant selected at
// runtime. Element-wise ops are bit-identical across backends; reductions use
// a fixed accumulation tree per backend, so results are deterministic for a
// given backend and agree across backends to ~1e-12 relative (covered by the
// equivalence tests).
namespace fringe::kernels {

enum class Backend { Auto, Scalar, Avx2 };

// Selects the implementation table. Auto picks the best supported backend.
// Throws std::invalid_argument if the requested backend is unavailable.
// Not safe to call while kernels are executing on other threads.
void set_backend(Backend b);
Backend active_backend();
std::string_view backend_name();
bool avx2_supported();

// dst = a + b / dst = a - b, element-wise. Aliasing dst with inputs is fine.
void add(const double* a, const double* b, double* dst, std::size_t n);
void sub(const double* a, const double* b, double* dst, std::size_t n);

// dst = a * scale + offset
void scale_offset(const double* a, double scale, double offset, double* dst, std::size_t n);

// dst = w*a + (1-w)*b, element-wise convex blend
void lerp(const double* a, const double* b, const double* w, double* dst, std::size_t n);

// dst = sqrt(re^2 + im^2)
void magnitude(const double* re, const double* im, double* dst, std::size_t n);

// dst = re / sqrt(re^2 + im^2) clamped to [-1, 1], i.e. cos(arg z); zero
// magnitude maps to 1 (the phase-zero convention for dead pixels)
void cosine_from_complex(const double* re, const double* im, double* dst, std::size_t n);

// Winner-take-all pass: where mag[i] > best_mag[i], replace best_{mag,re,im}
// and record `candidate` in best_idx. Strict > keeps the lowest index on ties.
void wta_update(const double* mag, const double* re, const double* im, std::int32_t candidate,
                double* best_mag, double* best_re, double* best_im, std::int32_t* best_idx,
                std::size_t n);

double sum(const double* a, std::size_t n);
double sum_abs(const double* a, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);

// Dual dot product against a complex tap row: out_re = a.bre, out_im = a.bim.
// This is the inner loop of the direct convolution path.
void dot2(const double* a, const double* bre, const double* bim, std::size_t n,
          double& out_re, double& out_im);

void minmax(const double* a, std::size_t n, double& mn, double& mx);

// Sums needed by the two-term ellipse normal equations, with u = x^2, v = y^2.
struct EllipseMoments {
  double suu = 0.0;  // sum x^4
  double suv = 0.0;  // sum x^2 y^2
  double svv = 0.0;  // sum y^4
  double su = 0.0;   // sum x^2
  double sv = 0.0;   // sum y^2
};

EllipseMoments ellipse_moments(const double* x, const double* y, std::size_t n);
EllipseMoments ellipse_moments_weighted(const double* x, const double* y, const double* w,
                                        std::size_t n);

}  // namespace fringe::kernels
