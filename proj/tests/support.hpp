#pragma once

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fringe/field.hpp"
#include "fringe/rng.hpp"

namespace testsup {

inline constexpr double kPi = std::numbers::pi;

// Scratch directory removed on scope exit; unique per instance so suites can
// run in parallel.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    const auto base = std::filesystem::temp_directory_path();
    for (int attempt = 0; attempt < 1000; ++attempt) {
      const auto candidate = base / ("fringe_" + tag + "_" + std::to_string(::getpid()) + "_" +
                                     std::to_string(counter_++));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("TempDir: cannot create scratch directory");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

inline fringe::ScalarField cosine_field(int width, int height, double fx, double fy,
                                        double offset = 0.0, double amplitude = 1.0,
                                        double background = 0.0) {
  fringe::ScalarField f(width, height);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      f.at(r, c) = background + amplitude * std::cos(fx * c + fy * r + offset);
    }
  }
  return f;
}

inline fringe::ScalarField noise_field(int width, int height, std::uint64_t seed,
                                       double sigma = 1.0, double mean = 0.0) {
  fringe::ScalarField f(width, height);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f.data()[i] = mean + sigma * fringe::rng::gaussian_at(seed, i);
  }
  return f;
}

// n exact points on theta1 (x-cx)^2 + theta2 (y-cy)^2 = 1, uniformly spaced
// in the ellipse parameter.
inline void ellipse_points(double theta1, double theta2, std::size_t n, std::vector<double>& x,
                           std::vector<double>& y, double cx = 0.0, double cy = 0.0,
                           double t0 = 0.0) {
  x.resize(n);
  y.resize(n);
  const double ax = 1.0 / std::sqrt(theta1);
  const double ay = 1.0 / std::sqrt(theta2);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t0 + 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
    x[i] = cx + ax * std::cos(t);
    y[i] = cy + ay * std::sin(t);
  }
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline double max_abs_diff(const fringe::ScalarField& a, const fringe::ScalarField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  }
  return m;
}

}  // namespace testsup
