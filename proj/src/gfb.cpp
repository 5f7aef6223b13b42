#include "fringe/gfb.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "fft.hpp"
#include "fringe/errors.hpp"
#include "fringe/kernels.hpp"

namespace fringe::gfb {
namespace {

constexpr int kDirectSizeLimit = 15;  // kernels above this go through the FFT

int mirror_index(int i, int n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -1 - i;
    if (i >= n) i = 2 * n - 1 - i;
  }
  return i;
}

ScalarField mirror_pad(const ScalarField& f, int h) {
  ScalarField out(f.width() + 2 * h, f.height() + 2 * h);
  for (int r = 0; r < out.height(); ++r) {
    const int sr = mirror_index(r - h, f.height());
    for (int c = 0; c < out.width(); ++c) {
      out.at(r, c) = f.at(sr, mirror_index(c - h, f.width()));
    }
  }
  return out;
}

void check_kernel_fits(const ScalarField& image, const GaborKernel& kernel) {
  if (kernel.size() > image.width() || kernel.size() > image.height()) {
    throw data_error("gfb: image " + std::to_string(image.width()) + "x" +
                     std::to_string(image.height()) + " is smaller than the " +
                     std::to_string(kernel.size()) + "x" + std::to_string(kernel.size()) +
                     " kernel");
  }
}

// Correlation of the padded image with the flipped kernel == convolution of
// the image with the kernel under mirror extension.
ComplexField filter_direct(const ScalarField& image, const GaborKernel& kernel) {
  const int h = kernel.half_extent;
  const int ks = kernel.size();
  const ScalarField padded = mirror_pad(image, h);

  std::vector<double> flip_re(static_cast<std::size_t>(ks) * ks);
  std::vector<double> flip_im(flip_re.size());
  for (int s = 0; s < ks; ++s) {
    for (int t = 0; t < ks; ++t) {
      const std::size_t src = static_cast<std::size_t>(ks - 1 - s) * ks + (ks - 1 - t);
      flip_re[static_cast<std::size_t>(s) * ks + t] = kernel.re[src];
      flip_im[static_cast<std::size_t>(s) * ks + t] = kernel.im[src];
    }
  }

  ComplexField out(image.width(), image.height());
  for (int r = 0; r < image.height(); ++r) {
    for (int c = 0; c < image.width(); ++c) {
      double acc_re = 0.0;
      double acc_im = 0.0;
      for (int s = 0; s < ks; ++s) {
        double row_re;
        double row_im;
        kernels::dot2(padded.row(r + s) + c, flip_re.data() + static_cast<std::size_t>(s) * ks,
                      flip_im.data() + static_cast<std::size_t>(s) * ks,
                      static_cast<std::size_t>(ks), row_re, row_im);
        acc_re += row_re;
        acc_im += row_im;
      }
      const std::size_t i = static_cast<std::size_t>(r) * image.width() + c;
      out.re()[i] = acc_re;
      out.im()[i] = acc_im;
    }
  }
  return out;
}

std::vector<std::complex<double>> kernel_spectrum(const GaborKernel& kernel, int rows, int cols) {
  std::vector<std::complex<double>> buf(static_cast<std::size_t>(rows) * cols);
  const int ks = kernel.size();
  for (int s = 0; s < ks; ++s) {
    for (int t = 0; t < ks; ++t) {
      const std::size_t src = static_cast<std::size_t>(s) * ks + t;
      buf[static_cast<std::size_t>(s) * cols + t] = {kernel.re[src], kernel.im[src]};
    }
  }
  fft::forward(rows, cols, buf.data());
  return buf;
}

// Extraction offset: with the image mirror-padded by `pad` and the kernel
// placed at the spectrum origin, output pixel (r, c) sits at
// (r + h + pad, c + h + pad) of the full linear convolution.
void extract_response(const std::vector<std::complex<double>>& conv, int cols, int offset,
                      double scale, int width, int height, double* out_re, double* out_im) {
  for (int r = 0; r < height; ++r) {
    const std::complex<double>* row =
        conv.data() + static_cast<std::size_t>(r + offset) * cols + offset;
    double* dst_re = out_re + static_cast<std::size_t>(r) * width;
    double* dst_im = out_im + static_cast<std::size_t>(r) * width;
    for (int c = 0; c < width; ++c) {
      dst_re[c] = row[c].real() * scale;
      dst_im[c] = row[c].imag() * scale;
    }
  }
}

ComplexField filter_fft(const ScalarField& image, const GaborKernel& kernel) {
  const int h = kernel.half_extent;
  const int rows = fft::next_fast_size(image.height() + 4 * h);
  const int cols = fft::next_fast_size(image.width() + 4 * h);

  const ScalarField padded = mirror_pad(image, h);
  std::vector<std::complex<double>> img(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < padded.height(); ++r) {
    for (int c = 0; c < padded.width(); ++c) {
      img[static_cast<std::size_t>(r) * cols + c] = padded.at(r, c);
    }
  }
  fft::forward(rows, cols, img.data());

  const std::vector<std::complex<double>> spec = kernel_spectrum(kernel, rows, cols);
  for (std::size_t i = 0; i < img.size(); ++i) img[i] *= spec[i];
  fft::inverse(rows, cols, img.data());

  ComplexField out(image.width(), image.height());
  extract_response(img, cols, 2 * h, 1.0 / (static_cast<double>(rows) * cols), image.width(),
                   image.height(), out.re(), out.im());
  return out;
}

void check_config(const GfbConfig& cfg) {
  if (cfg.periods.empty()) throw std::invalid_argument("gfb: empty period list");
  for (double p : cfg.periods) {
    if (!(p >= 3.0) || !std::isfinite(p)) {
      throw std::invalid_argument("gfb: period " + std::to_string(p) + " must be >= 3 pixels");
    }
  }
  if (cfg.orientation_count < 1) {
    throw std::invalid_argument("gfb: orientation count must be >= 1");
  }
  if (!(cfg.sigma_ratio > 0.0)) throw std::invalid_argument("gfb: sigma ratio must be > 0");
  if (!(cfg.window_ratio > 0.0)) throw std::invalid_argument("gfb: window ratio must be > 0");
}

}  // namespace

GaborKernel make_kernel(double period, double theta, double sigma_ratio, double window_ratio,
                        bool zero_dc) {
  if (!(period >= 3.0) || !std::isfinite(period)) {
    throw std::invalid_argument("gfb: period " + std::to_string(period) + " must be >= 3 pixels");
  }
  if (!(sigma_ratio > 0.0) || !(window_ratio > 0.0)) {
    throw std::invalid_argument("gfb: sigma and window ratios must be > 0");
  }
  GaborKernel k;
  k.half_extent = std::max(1, static_cast<int>(std::lround(window_ratio * period)));
  k.sigma = sigma_ratio * period;
  k.period = period;
  const double freq = 2.0 * std::numbers::pi / period;
  k.omega_x = freq * std::cos(theta);
  k.omega_y = freq * std::sin(theta);

  const int ks = k.size();
  k.re.resize(static_cast<std::size_t>(ks) * ks);
  k.im.resize(k.re.size());
  const double denom = 2.0 * k.sigma * k.sigma;
  for (int s = 0; s < ks; ++s) {
    const double dy = s - k.half_extent;
    for (int t = 0; t < ks; ++t) {
      const double dx = t - k.half_extent;
      const double window = std::exp(-(dx * dx + dy * dy) / denom);
      const double carrier = k.omega_x * dx + k.omega_y * dy;
      const std::size_t i = static_cast<std::size_t>(s) * ks + t;
      k.re[i] = window * std::cos(carrier);
      k.im[i] = -window * std::sin(carrier);
    }
  }

  if (zero_dc) {
    const double n = static_cast<double>(k.re.size());
    const double mean_re = kernels::sum(k.re.data(), k.re.size()) / n;
    const double mean_im = kernels::sum(k.im.data(), k.im.size()) / n;
    kernels::scale_offset(k.re.data(), 1.0, -mean_re, k.re.data(), k.re.size());
    kernels::scale_offset(k.im.data(), 1.0, -mean_im, k.im.data(), k.im.size());
  }

  std::vector<double> moduli(k.re.size());
  kernels::magnitude(k.re.data(), k.im.data(), moduli.data(), moduli.size());
  const double l1 = kernels::sum(moduli.data(), moduli.size());
  if (l1 > 0.0) {
    kernels::scale_offset(k.re.data(), 1.0 / l1, 0.0, k.re.data(), k.re.size());
    kernels::scale_offset(k.im.data(), 1.0 / l1, 0.0, k.im.data(), k.im.size());
  }
  return k;
}

std::vector<GaborKernel> build_bank(const GfbConfig& config) {
  check_config(config);
  std::vector<GaborKernel> bank;
  bank.reserve(config.periods.size() * config.orientation_count);
  for (double period : config.periods) {
    for (int j = 0; j < config.orientation_count; ++j) {
      const double theta = j * std::numbers::pi / config.orientation_count;
      GaborKernel k = make_kernel(period, theta, config.sigma_ratio, config.window_ratio,
                                  config.zero_dc);
      k.orientation_index = j;
      bank.push_back(std::move(k));
    }
  }
  return bank;
}

ComplexField filter_image(const ScalarField& image, const GaborKernel& kernel, ConvPath path) {
  if (image.empty()) throw data_error("gfb: empty image");
  check_kernel_fits(image, kernel);
  if (path == ConvPath::Auto) {
    path = kernel.size() > kDirectSizeLimit ? ConvPath::Fft : ConvPath::Direct;
  }
  return path == ConvPath::Fft ? filter_fft(image, kernel) : filter_direct(image, kernel);
}

struct Normalizer::Impl {
  GfbConfig cfg;
  std::vector<GaborKernel> bank;
  int h_max = 0;
  bool any_fft = false;

  mutable std::mutex mu;
  // Keyed by padded transform shape; one spectrum per FFT-routed kernel
  // (direct-routed slots stay empty).
  mutable std::map<std::pair<int, int>, std::vector<std::vector<std::complex<double>>>> spectra;

  const std::vector<std::vector<std::complex<double>>>& spectra_for(int rows, int cols) const {
    std::lock_guard<std::mutex> lock(mu);
    auto it = spectra.find({rows, cols});
    if (it != spectra.end()) return it->second;
    std::vector<std::vector<std::complex<double>>> all(bank.size());
    for (std::size_t k = 0; k < bank.size(); ++k) {
      if (bank[k].size() > kDirectSizeLimit) all[k] = kernel_spectrum(bank[k], rows, cols);
    }
    return spectra.emplace(std::make_pair(rows, cols), std::move(all)).first->second;
  }
};

Normalizer::Normalizer(GfbConfig config) : impl_(std::make_unique<Impl>()) {
  impl_->cfg = std::move(config);
  impl_->bank = build_bank(impl_->cfg);
  for (const GaborKernel& k : impl_->bank) {
    impl_->h_max = std::max(impl_->h_max, k.half_extent);
    impl_->any_fft = impl_->any_fft || k.size() > kDirectSizeLimit;
  }
}

Normalizer::~Normalizer() = default;
Normalizer::Normalizer(Normalizer&&) noexcept = default;
Normalizer& Normalizer::operator=(Normalizer&&) noexcept = default;

const GfbConfig& Normalizer::config() const { return impl_->cfg; }
const std::vector<GaborKernel>& Normalizer::bank() const { return impl_->bank; }
int Normalizer::max_half_extent() const { return impl_->h_max; }

GfbResponse Normalizer::run(const ScalarField& image) const {
  for (const GaborKernel& k : impl_->bank) check_kernel_fits(image, k);
  const int width = image.width();
  const int height = image.height();
  const std::size_t n = image.size();

  std::vector<double> best_mag(n, -1.0);
  std::vector<double> best_re(n, 0.0);
  std::vector<double> best_im(n, 0.0);
  std::vector<std::int32_t> winner(n, 0);
  std::vector<double> re_buf(n);
  std::vector<double> im_buf(n);
  std::vector<double> mag_buf(n);

  // One padded forward transform per image; every FFT-routed kernel reuses it.
  int rows = 0;
  int cols = 0;
  std::vector<std::complex<double>> image_spec;
  std::vector<std::complex<double>> scratch;
  const std::vector<std::vector<std::complex<double>>>* spectra = nullptr;
  if (impl_->any_fft) {
    rows = fft::next_fast_size(height + 4 * impl_->h_max);
    cols = fft::next_fast_size(width + 4 * impl_->h_max);
    const ScalarField padded = mirror_pad(image, impl_->h_max);
    image_spec.assign(static_cast<std::size_t>(rows) * cols, {0.0, 0.0});
    for (int r = 0; r < padded.height(); ++r) {
      for (int c = 0; c < padded.width(); ++c) {
        image_spec[static_cast<std::size_t>(r) * cols + c] = padded.at(r, c);
      }
    }
    fft::forward(rows, cols, image_spec.data());
    spectra = &impl_->spectra_for(rows, cols);
    scratch.resize(image_spec.size());
  }

  for (std::size_t k = 0; k < impl_->bank.size(); ++k) {
    const GaborKernel& kernel = impl_->bank[k];
    if (kernel.size() > kDirectSizeLimit) {
      const std::vector<std::complex<double>>& spec = (*spectra)[k];
      for (std::size_t i = 0; i < scratch.size(); ++i) scratch[i] = image_spec[i] * spec[i];
      fft::inverse(rows, cols, scratch.data());
      extract_response(scratch, cols, kernel.half_extent + impl_->h_max,
                       1.0 / (static_cast<double>(rows) * cols), width, height, re_buf.data(),
                       im_buf.data());
    } else {
      const ComplexField resp = filter_direct(image, kernel);
      std::copy(resp.re(), resp.re() + n, re_buf.begin());
      std::copy(resp.im(), resp.im() + n, im_buf.begin());
    }
    kernels::magnitude(re_buf.data(), im_buf.data(), mag_buf.data(), n);
    kernels::wta_update(mag_buf.data(), re_buf.data(), im_buf.data(), static_cast<std::int32_t>(k),
                        best_mag.data(), best_re.data(), best_im.data(), winner.data(), n);
  }

  GfbResponse out;
  std::vector<double> psi(n);
  for (std::size_t i = 0; i < n; ++i) {
    psi[i] = wrap_to_pi(-std::atan2(best_im[i], best_re[i]));
  }
  std::vector<double> normalized(n);
  kernels::cosine_from_complex(best_re.data(), best_im.data(), normalized.data(), n);
  out.magnitude = ScalarField::from_samples(width, height, std::move(best_mag));
  out.phase = ScalarField::from_samples(width, height, std::move(psi));
  out.normalized = ScalarField::from_samples(width, height, std::move(normalized));
  out.winner = std::move(winner);
  return out;
}

GfbResponse normalize(const ScalarField& image, const GfbConfig& config) {
  return Normalizer(config).run(image);
}

ScalarField gaussian_lowpass(const ScalarField& image, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("gfb: lowpass sigma must be > 0");
  }
  const int half = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> w(static_cast<std::size_t>(2 * half + 1));
  double total = 0.0;
  for (int j = -half; j <= half; ++j) {
    w[static_cast<std::size_t>(j + half)] = std::exp(-(j * j) / (2.0 * sigma * sigma));
    total += w[static_cast<std::size_t>(j + half)];
  }
  for (double& v : w) v /= total;

  const int width = image.width();
  const int height = image.height();
  ScalarField horizontal(width, height);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      double acc = 0.0;
      for (int j = -half; j <= half; ++j) {
        acc += w[static_cast<std::size_t>(j + half)] * image.at(r, mirror_index(c + j, width));
      }
      horizontal.at(r, c) = acc;
    }
  }
  ScalarField out(width, height);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      double acc = 0.0;
      for (int j = -half; j <= half; ++j) {
        acc += w[static_cast<std::size_t>(j + half)] * horizontal.at(mirror_index(r + j, height), c);
      }
      out.at(r, c) = acc;
    }
  }
  return out;
}

ScalarField low_freq_blend(const GfbResponse& response, const ScalarField& original,
                           double lowpass_sigma) {
  if (!response.magnitude.same_shape(original)) {
    throw std::invalid_argument("gfb: blend inputs must share the response shape");
  }
  double mag_min = 0.0;
  double mag_max = 0.0;
  kernels::minmax(response.magnitude.data(), response.magnitude.size(), mag_min, mag_max);
  if (!(mag_max > 0.0)) {
    throw degeneracy_error("gfb: all-zero response magnitude, nothing to blend");
  }

  ScalarField low = gaussian_lowpass(original, lowpass_sigma);
  double lo = 0.0;
  double hi = 0.0;
  kernels::minmax(low.data(), low.size(), lo, hi);
  ScalarField rescaled = hi > lo
                             ? scale_offset(low, 2.0 / (hi - lo), -(hi + lo) / (hi - lo))
                             : ScalarField(low.width(), low.height(), 0.0);

  std::vector<double> alpha(response.magnitude.size());
  kernels::scale_offset(response.magnitude.data(), 1.0 / mag_max, 0.0, alpha.data(), alpha.size());
  std::vector<double> blended(alpha.size());
  kernels::lerp(response.normalized.data(), rescaled.data(), alpha.data(), blended.data(),
                blended.size());
  return ScalarField::from_samples(original.width(), original.height(), std::move(blended));
}

}  // namespace fringe::gfb
