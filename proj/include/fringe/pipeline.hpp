#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fringe/demod.hpp"
#include "fringe/ellipse.hpp"
#include "fringe/field.hpp"
#include "fringe/gfb.hpp"
#include "fringe/synth.hpp"

namespace fringe::bench {

struct PipelineConfig {
  gfb::GfbConfig gfb;
  ellipse::RobustConfig robust;
  std::vector<demod::Method> methods{demod::Method::SlefLs, demod::Method::SlefRe,
                                     demod::Method::Lef5Term};
  int stride = 1;
  // Auto (-1): widest filter half-extent when normalizing, 0 when skipping.
  int border_crop = -1;
  bool skip_normalize = false;
  bool piston_removal = false;
  std::optional<double> blend_sigma;  // low-frequency fallback blend, off by default
  bool keep_responses = false;        // retain full filter-bank outputs per frame
};

struct MethodRun {
  demod::Method method = demod::Method::SlefLs;
  bool ok = false;
  std::string status = "ok";        // exception text when ok is false
  bool degenerate_failure = false;  // failure was a numerical degeneracy
  double delta = 0.0;
  int iterations = 0;
  double residual_rms = 0.0;
  demod::PhaseMapResult map;
  std::optional<double> delta_abs_error;  // set when the pair carries truth
  std::optional<double> phase_mae;
  double wall_ms = 0.0;
  std::optional<ellipse::EllipseFit2> fit2;
  std::optional<ellipse::EllipseFit5> fit5;
};

struct PairRun {
  ScalarField n1;
  ScalarField n2;
  std::optional<gfb::GfbResponse> response1;
  std::optional<gfb::GfbResponse> response2;
  ellipse::LissajousCloud cloud;
  int border_crop = 0;
  double normalize_ms = 0.0;
  std::vector<MethodRun> methods;
};

// Normalizes both frames (unless skipped), fits the requested ellipse models
// and demodulates each at its own estimated step. Per-method failures are
// captured in `status`; infrastructure failures (bad shapes, normalization)
// propagate. Pass a shared Normalizer to reuse cached filter spectra across
// pairs; it must outlive the call.
PairRun run_pair(const synth::InterferogramPair& pair, const PipelineConfig& config,
                 const gfb::Normalizer* shared = nullptr);

}  // namespace fringe::bench
