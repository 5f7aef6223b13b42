#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fringe/field.hpp"

// Seeded synthetic interferogram generator. Each frame follows
//
//   frame_k(p) = a_k(p) + b_k(p) * cos(phi(p) + delta_k) + noise_k(p)
//
// with delta_1 = 0 and delta_2 = step. Background a and amplitude b share one
// parameterization (Gaussian illumination envelope with a per-frame
// multiplicative drift); noise is zero-mean Gaussian from the counter-based
// RNG, so generation is a pure function of the spec.
namespace fringe::synth {

enum class PhaseKind { RadialQuadratic, GaussianPeaks, LinearCarrier };

struct GaussianPeak {
  double amplitude = 1.0;  // radians at the peak
  double center_x = 0.5;   // relative image coordinates in [0, 1]
  double center_y = 0.5;
  double width = 32.0;     // pixels, > 0
};

struct PhaseSpec {
  PhaseKind kind = PhaseKind::RadialQuadratic;
  double offset = 0.0;  // radians added everywhere

  // radial-quadratic: phi = curvature * |p - center|^2 + offset, concentric
  // circular fringes around the center.
  double center_x = 0.5;  // relative coordinates
  double center_y = 0.5;
  double curvature = 0.0025;  // radians / pixel^2

  // gaussian-peaks: phi = offset + carrier + sum of Gaussian bumps. Bump
  // gradients shift the local fringe frequency around the carrier's.
  std::vector<GaussianPeak> peaks;

  // linear-carrier: phi = offset + frequency_x * col + frequency_y * row.
  // Also the carrier term of gaussian-peaks; ignored by radial-quadratic.
  double frequency_x = 0.0;  // radians / pixel
  double frequency_y = 0.0;
};

struct ModulationSpec {
  double base = 1.0;             // peak level; background >= 0, amplitude > 0
  double envelope_center_x = 0.5;  // relative coordinates
  double envelope_center_y = 0.5;
  double envelope_width = 0.0;   // Gaussian sigma in pixels; 0 = uniform
  double drift = 1.0;            // multiplicative factor applied to frame 2
};

struct NoiseSpec {
  double sigma = 0.0;       // std dev relative to unit fringe amplitude
  std::uint64_t seed = 0;   // per-frame streams are derived internally
};

struct PairSpec {
  int width = 256;
  int height = 256;
  double step = 1.0471975511965976;  // pi/3, must lie strictly inside (0, pi)
  PhaseSpec phase;
  ModulationSpec background;
  ModulationSpec amplitude;
  NoiseSpec noise;
};

struct InterferogramPair {
  ScalarField frame1;
  ScalarField frame2;
  std::optional<ScalarField> truth_phase;  // unwrapped radians
  std::optional<double> truth_step;
};

// Ground-truth building blocks, exposed for tests and diagnostics.
ScalarField phase_field(const PhaseSpec& spec, int width, int height);
ScalarField modulation_field(const ModulationSpec& spec, int width, int height, int frame_index);

InterferogramPair generate_pair(const PhaseSpec& phase, const ModulationSpec& background,
                                const ModulationSpec& amplitude, const NoiseSpec& noise,
                                double step, int width, int height);
InterferogramPair generate_pair(const PairSpec& spec);

// Factorial benchmark suite: `families` fringe patterns (tilted plane-wave
// carriers with seed-derived period, orientation and illumination envelopes),
// crossed with every noise level and phase step. Seeds are derived
// deterministically from base_seed, so the suite is reproducible.
struct SuiteSpec {
  int width = 256;
  int height = 256;
  int families = 10;
  std::vector<double> noise_sigmas = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> steps = {0.3141592653589793, 0.5235987755982988, 0.7853981633974483,
                               1.0471975511965976, 1.5707963267948966};
  std::uint64_t base_seed = 3;
};

struct SuitePair {
  std::string pattern_id;  // "p00", "p01", ...
  PairSpec spec;           // carries its own noise sigma and step
};

std::vector<SuitePair> build_suite(const SuiteSpec& spec);
std::vector<SuitePair> benchmark_suite(int width, int height);

// JSON round trip. The top-level object carries either a "pair" or a "suite"
// key; parse failures raise data_error naming the offending key.
std::string to_json_text(const PairSpec& spec);
std::string to_json_text(const SuiteSpec& spec);
PairSpec pair_spec_from_json_text(const std::string& text);
SuiteSpec suite_spec_from_json_text(const std::string& text);
bool json_text_is_suite(const std::string& text);

}  // namespace fringe::synth
