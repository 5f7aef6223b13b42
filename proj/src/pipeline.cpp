#include "fringe/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "fringe/errors.hpp"

namespace fringe::bench {
namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

MethodRun run_method(demod::Method method, const ellipse::LissajousCloud& cloud,
                     const PairRun& pair, const synth::InterferogramPair& truth,
                     const PipelineConfig& cfg) {
  MethodRun run;
  run.method = method;
  const auto start = std::chrono::steady_clock::now();
  try {
    demod::PhaseStepEstimate est;
    if (method == demod::Method::Lef5Term) {
      run.fit5 = ellipse::fit_ls5(cloud);
      est = demod::step_from_fit(*run.fit5);
    } else {
      run.fit2 = method == demod::Method::SlefRe ? ellipse::fit_robust(cloud, cfg.robust)
                                                 : ellipse::fit_ls2(cloud);
      est = demod::step_from_fit(*run.fit2, method);
    }
    run.delta = est.delta;
    run.iterations = est.iterations;
    run.residual_rms = est.residual_rms;

    run.map = demod::phase_two_step(pair.n1, pair.n2, est.delta);
    demod::mask_border(run.map, pair.border_crop);

    if (truth.truth_step) {
      run.delta_abs_error = std::abs(wrap_to_pi(est.delta - *truth.truth_step));
    }
    if (truth.truth_phase) {
      ScalarField wrapped_truth(truth.truth_phase->width(), truth.truth_phase->height());
      for (std::size_t i = 0; i < wrapped_truth.size(); ++i) {
        wrapped_truth.data()[i] = wrap_to_pi(truth.truth_phase->data()[i]);
      }
      run.phase_mae = demod::wrapped_error(run.map, wrapped_truth, cfg.piston_removal).mae;
    }
    run.ok = true;
  } catch (const degeneracy_error& e) {
    run.ok = false;
    run.status = e.what();
    run.degenerate_failure = true;
  } catch (const std::exception& e) {
    run.ok = false;
    run.status = e.what();
  }
  run.wall_ms = ms_since(start);
  return run;
}

}  // namespace

PairRun run_pair(const synth::InterferogramPair& pair, const PipelineConfig& config,
                 const gfb::Normalizer* shared) {
  if (!pair.frame1.same_shape(pair.frame2)) {
    throw std::invalid_argument("pipeline: interferogram frames differ in shape");
  }
  if (config.stride < 1) throw std::invalid_argument("pipeline: stride must be >= 1");
  if (config.methods.empty()) throw std::invalid_argument("pipeline: no methods selected");

  PairRun out;
  const auto start = std::chrono::steady_clock::now();
  if (config.skip_normalize) {
    out.n1 = pair.frame1;
    out.n2 = pair.frame2;
    out.border_crop = config.border_crop < 0 ? 0 : config.border_crop;
  } else {
    std::optional<gfb::Normalizer> local;
    const gfb::Normalizer* norm = shared;
    if (norm == nullptr) {
      local.emplace(config.gfb);
      norm = &*local;
    }
    gfb::GfbResponse r1 = norm->run(pair.frame1);
    gfb::GfbResponse r2 = norm->run(pair.frame2);
    if (config.blend_sigma) {
      out.n1 = gfb::low_freq_blend(r1, pair.frame1, *config.blend_sigma);
      out.n2 = gfb::low_freq_blend(r2, pair.frame2, *config.blend_sigma);
    } else {
      out.n1 = r1.normalized;
      out.n2 = r2.normalized;
    }
    out.border_crop = config.border_crop < 0 ? norm->max_half_extent() : config.border_crop;
    if (config.keep_responses) {
      out.response1 = std::move(r1);
      out.response2 = std::move(r2);
    }
  }
  out.normalize_ms = ms_since(start);

  out.cloud = ellipse::build_cloud(out.n1, out.n2, config.stride, out.border_crop);
  out.methods.reserve(config.methods.size());
  for (demod::Method m : config.methods) {
    out.methods.push_back(run_method(m, out.cloud, out, pair, config));
  }
  return out;
}

}  // namespace fringe::bench
