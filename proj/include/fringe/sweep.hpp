#pragma once

#include <string>
#include <vector>

#include "fringe/pipeline.hpp"
#include "fringe/synth.hpp"

namespace fringe::bench {

struct SweepRow {
  std::string pattern_id;
  double noise_sigma = 0.0;
  double true_delta = 0.0;
  std::string method;
  bool ok = false;
  std::string status = "ok";
  double estimated_delta = 0.0;
  double delta_abs_error = 0.0;
  double phase_mae = 0.0;
  int iterations = 0;
  double wall_ms = 0.0;
};

// Runs every suite pair through the pipeline. Rows come back sorted by
// (pattern, noise, step, method) regardless of worker scheduling, so a fixed
// suite yields identical rows across runs; only wall_ms varies.
// jobs == 0 picks a thread count automatically.
std::vector<SweepRow> run_sweep(const synth::SuiteSpec& suite, const PipelineConfig& config,
                                int jobs = 0);

// Full per-pair table. Failed rows leave the numeric columns empty.
std::string sweep_csv_text(const std::vector<SweepRow>& rows);

// Mean/stddev of the error metrics grouped by noise level or by true step,
// per method, over rows that succeeded.
std::string aggregate_by_noise_csv_text(const std::vector<SweepRow>& rows);
std::string aggregate_by_step_csv_text(const std::vector<SweepRow>& rows);

// Writes sweep.csv, sweep_by_noise.csv and sweep_by_step.csv under `dir`.
void write_sweep_outputs(const std::vector<SweepRow>& rows, const std::string& dir);

}  // namespace fringe::bench
