#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "fringe/field.hpp"

// Gabor filter bank normalization. Each filter is a complex exponential
// e^{-i omega.u} under a Gaussian window, mean-subtracted (so constants are
// rejected) and L1-normalized (so magnitudes are comparable across periods).
// Filtering every bank member and keeping the strongest response per pixel
// yields the local fringe magnitude and phase; the normalized pattern is the
// cosine of that phase: unit amplitude, zero background.
namespace fringe::gfb {

struct GfbConfig {
  std::vector<double> periods = {7.0, 10.0, 15.0, 25.0};  // fringe period in pixels, each >= 3
  int orientation_count = 10;  // orientations j*pi/count, j = 0..count-1
  double sigma_ratio = 0.5;    // Gaussian window sigma = ratio * period
  double window_ratio = 2.0;   // kernel half extent = round(ratio * period)
  bool zero_dc = true;         // subtract the tap mean
};

struct GaborKernel {
  int half_extent = 0;  // taps cover offsets [-h, h]^2
  double omega_x = 0.0;  // tuned frequency (radians/pixel), x = column axis
  double omega_y = 0.0;
  double sigma = 0.0;
  double period = 0.0;        // bank bookkeeping
  int orientation_index = 0;  // within the bank's orientation sweep
  std::vector<double> re;     // (2h+1)^2 taps, row-major, row = y offset + h
  std::vector<double> im;

  int size() const { return 2 * half_extent + 1; }
};

GaborKernel make_kernel(double period, double theta, double sigma_ratio = 0.5,
                        double window_ratio = 2.0, bool zero_dc = true);

// periods.size() * orientation_count kernels, flat index
// period_index * orientation_count + orientation_index.
std::vector<GaborKernel> build_bank(const GfbConfig& config);

enum class ConvPath { Auto, Direct, Fft };

// Complex response of the kernel over the full image with symmetric (mirror)
// boundary extension. Auto routes kernels larger than 15x15 through the FFT;
// both paths agree to FFT rounding. Images smaller than the kernel raise
// data_error.
ComplexField filter_image(const ScalarField& image, const GaborKernel& kernel,
                          ConvPath path = ConvPath::Auto);

struct GfbResponse {
  ScalarField magnitude;   // winning response magnitude m(x)
  ScalarField phase;       // winning fringe phase psi(x) in (-pi, pi]
  ScalarField normalized;  // cos(psi), values in [-1, 1]
  std::vector<std::int32_t> winner;  // flat bank index per pixel

  int width() const { return magnitude.width(); }
  int height() const { return magnitude.height(); }
};

// Builds the bank once and caches kernel spectra per padded transform size,
// so repeated same-size images pay one forward FFT plus one inverse per
// kernel. A single instance may be shared across threads.
class Normalizer {
 public:
  explicit Normalizer(GfbConfig config);
  ~Normalizer();
  Normalizer(Normalizer&&) noexcept;
  Normalizer& operator=(Normalizer&&) noexcept;

  const GfbConfig& config() const;
  const std::vector<GaborKernel>& bank() const;
  int max_half_extent() const;

  GfbResponse run(const ScalarField& image) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot convenience over Normalizer.
GfbResponse normalize(const ScalarField& image, const GfbConfig& config);

// Separable Gaussian blur, window truncated at 3 sigma, mirror boundaries.
ScalarField gaussian_lowpass(const ScalarField& image, double sigma);

// Per-pixel convex blend alpha*normalized + (1-alpha)*lowpass, where alpha is
// the winner magnitude rescaled by its maximum and lowpass is the blurred
// original rescaled to [-1, 1] by its min/max. Recovers fringes whose period
// falls outside the bank. All-zero magnitude raises degeneracy_error.
ScalarField low_freq_blend(const GfbResponse& response, const ScalarField& original,
                           double lowpass_sigma);

}  // namespace fringe::gfb
