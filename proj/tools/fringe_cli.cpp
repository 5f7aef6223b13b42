// fringe: two-frame interferogram phase-step and phase-map recovery.
//
// Subcommands: generate, normalize, estimate-step, demodulate, sweep,
// compare. Exit codes: 0 success, 1 usage, 2 data error, 3 numerical
// degeneracy.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fringe/demod.hpp"
#include "fringe/ellipse.hpp"
#include "fringe/errors.hpp"
#include "fringe/field.hpp"
#include "fringe/field_io.hpp"
#include "fringe/gfb.hpp"
#include "fringe/kernels.hpp"
#include "fringe/pipeline.hpp"
#include "fringe/sweep.hpp"
#include "fringe/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Argument combinations CLI11 cannot express (either/or inputs); mapped to
// exit code 1 like any other usage problem.
struct usage_error : std::runtime_error {
  explicit usage_error(const std::string& what) : std::runtime_error(what) {}
};

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw fringe::data_error(path + ": cannot open");
  std::ostringstream out;
  out << f.rdbuf();
  if (!f.good() && !f.eof()) throw fringe::data_error(path + ": read failed");
  return out.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text) || !f.flush()) {
    throw fringe::data_error(path.string() + ": write failed");
  }
}

json parse_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw fringe::data_error(path + ": " + e.what());
  }
}

// Flag values that override whatever --config provided.
struct PipelineFlags {
  std::string config_path;
  std::optional<int> stride;
  std::optional<int> border_crop;
  std::optional<double> kappa;
  std::optional<int> iterations;
  std::optional<double> blend_sigma;
  std::vector<std::string> methods;
  bool skip_normalize = false;
  bool piston_removal = false;
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file (pipeline section)");
  cmd->add_option("--stride", f.stride, "sample every n-th pixel when building the cloud");
  cmd->add_option("--border-crop", f.border_crop,
                  "pixels to drop on each side (-1 = widest filter half-extent)");
  cmd->add_option("--kappa", f.kappa, "Leclerc scale for the robust fit");
  cmd->add_option("--iterations", f.iterations, "max linear solves for the robust fit");
  cmd->add_option("--blend-sigma", f.blend_sigma,
                  "enable the low-frequency blend with this lowpass sigma");
  cmd->add_option("--methods", f.methods, "fitters to run (SLEF-LS, SLEF-RE, LEF-5term)")
      ->delimiter(',');
  cmd->add_flag("--skip-normalize", f.skip_normalize,
                "treat the input frames as already normalized");
  cmd->add_flag("--piston-removal", f.piston_removal,
                "subtract the circular-mean offset before phase scoring");
}

void apply_pipeline_json(const json& root, fringe::bench::PipelineConfig& cfg) {
  const json& p = root.contains("pipeline") ? root.at("pipeline") : root;
  if (p.contains("gfb")) {
    const json& g = p.at("gfb");
    cfg.gfb.periods = g.value("periods", cfg.gfb.periods);
    cfg.gfb.orientation_count = g.value("orientations", cfg.gfb.orientation_count);
    cfg.gfb.sigma_ratio = g.value("sigma_ratio", cfg.gfb.sigma_ratio);
    cfg.gfb.window_ratio = g.value("window_ratio", cfg.gfb.window_ratio);
    cfg.gfb.zero_dc = g.value("zero_dc", cfg.gfb.zero_dc);
  }
  if (p.contains("robust")) {
    const json& r = p.at("robust");
    cfg.robust.kappa = r.value("kappa", cfg.robust.kappa);
    cfg.robust.max_iterations = r.value("max_iterations", cfg.robust.max_iterations);
    cfg.robust.convergence_tol = r.value("convergence_tol", cfg.robust.convergence_tol);
  }
  if (p.contains("methods")) {
    cfg.methods.clear();
    for (const json& name : p.at("methods")) {
      cfg.methods.push_back(fringe::demod::method_from_name(name.get<std::string>()));
    }
  }
  cfg.stride = p.value("stride", cfg.stride);
  cfg.border_crop = p.value("border_crop", cfg.border_crop);
  cfg.skip_normalize = p.value("skip_normalize", cfg.skip_normalize);
  cfg.piston_removal = p.value("piston_removal", cfg.piston_removal);
  if (p.contains("blend_sigma") && !p.at("blend_sigma").is_null()) {
    cfg.blend_sigma = p.at("blend_sigma").get<double>();
  }
}

fringe::bench::PipelineConfig build_pipeline_config(const PipelineFlags& f) {
  fringe::bench::PipelineConfig cfg;
  if (!f.config_path.empty()) {
    try {
      apply_pipeline_json(parse_json_file(f.config_path), cfg);
    } catch (const json::exception& e) {
      throw fringe::data_error(f.config_path + ": " + e.what());
    }
  }
  if (f.stride) cfg.stride = *f.stride;
  if (f.border_crop) cfg.border_crop = *f.border_crop;
  if (f.kappa) cfg.robust.kappa = *f.kappa;
  if (f.iterations) cfg.robust.max_iterations = *f.iterations;
  if (f.blend_sigma) cfg.blend_sigma = *f.blend_sigma;
  if (!f.methods.empty()) {
    cfg.methods.clear();
    for (const std::string& name : f.methods) {
      cfg.methods.push_back(fringe::demod::method_from_name(name));
    }
  }
  if (f.skip_normalize) cfg.skip_normalize = true;
  if (f.piston_removal) cfg.piston_removal = true;
  return cfg;
}

// Either a pair directory from `generate` or explicit frame paths.
struct PairInputs {
  std::string pair_dir;
  std::string frame1;
  std::string frame2;
  std::string truth_phase;
  std::optional<double> truth_step;
};

void add_pair_inputs(CLI::App* cmd, PairInputs& in) {
  cmd->add_option("--pair", in.pair_dir, "pair directory written by `fringe generate`");
  cmd->add_option("--frame1", in.frame1, "first interferogram (pfm/png/csv)");
  cmd->add_option("--frame2", in.frame2, "second interferogram (pfm/png/csv)");
  cmd->add_option("--truth-phase", in.truth_phase, "ground-truth unwrapped phase image");
  cmd->add_option("--truth-step", in.truth_step, "ground-truth phase step in radians");
}

fringe::synth::InterferogramPair load_pair(const PairInputs& in) {
  fringe::synth::InterferogramPair pair;
  if (!in.pair_dir.empty()) {
    if (!in.frame1.empty() || !in.frame2.empty()) {
      throw usage_error("give either --pair or --frame1/--frame2, not both");
    }
    const fs::path dir(in.pair_dir);
    pair.frame1 = fringe::load_field((dir / "frame1.pfm").string());
    pair.frame2 = fringe::load_field((dir / "frame2.pfm").string());
    if (fs::exists(dir / "truth_phase.pfm")) {
      pair.truth_phase = fringe::load_field((dir / "truth_phase.pfm").string());
    }
    if (fs::exists(dir / "truth.json")) {
      const json truth = parse_json_file((dir / "truth.json").string());
      if (truth.contains("truth_step")) pair.truth_step = truth.at("truth_step").get<double>();
    }
  } else {
    if (in.frame1.empty() || in.frame2.empty()) {
      throw usage_error("need --pair DIR, or both --frame1 and --frame2");
    }
    pair.frame1 = fringe::load_field(in.frame1);
    pair.frame2 = fringe::load_field(in.frame2);
    if (!in.truth_phase.empty()) pair.truth_phase = fringe::load_field(in.truth_phase);
  }
  if (in.truth_step) pair.truth_step = *in.truth_step;
  return pair;
}

std::string pair_label(const std::string& pattern_id, double sigma, double step) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_n%.2f_d%.4f", pattern_id.c_str(), sigma, step);
  return buf;
}

void write_pair_dir(const fs::path& dir, const fringe::synth::PairSpec& spec) {
  fs::create_directories(dir);
  const fringe::synth::InterferogramPair pair = fringe::synth::generate_pair(spec);
  fringe::save_field(pair.frame1, (dir / "frame1.pfm").string());
  fringe::save_field(pair.frame2, (dir / "frame2.pfm").string());
  if (pair.truth_phase) {
    fringe::save_field(*pair.truth_phase, (dir / "truth_phase.pfm").string());
  }
  json truth = json::parse(fringe::synth::to_json_text(spec));
  truth["truth_step"] = spec.step;
  write_text_file(dir / "truth.json", truth.dump(2) + "\n");
}

json method_report(const fringe::bench::MethodRun& m) {
  json j;
  j["method"] = fringe::demod::method_name(m.method);
  j["ok"] = m.ok;
  j["status"] = m.status;
  if (m.ok) {
    j["delta"] = m.delta;
    j["iterations"] = m.iterations;
    j["residual_rms"] = m.residual_rms;
    if (m.delta_abs_error) j["delta_abs_error"] = *m.delta_abs_error;
    if (m.phase_mae) j["phase_mae"] = *m.phase_mae;
    if (m.map.phase.size() > 0) {
      j["valid_fraction"] = static_cast<double>(m.map.valid_count) /
                            static_cast<double>(m.map.phase.size());
    }
    if (m.fit2) j["fit"] = json::parse(fringe::ellipse::fit_to_json_text(*m.fit2));
    if (m.fit5) j["fit"] = json::parse(fringe::ellipse::fit_to_json_text(*m.fit5));
  }
  j["wall_ms"] = m.wall_ms;
  return j;
}

void emit_report(const json& report, const std::string& out_path) {
  const std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
  }
}

fringe::ScalarField wrapped_truth_of(const fringe::synth::InterferogramPair& pair) {
  const fringe::ScalarField& truth = *pair.truth_phase;
  fringe::ScalarField wrapped(truth.width(), truth.height());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    wrapped.data()[i] = fringe::wrap_to_pi(truth.data()[i]);
  }
  return wrapped;
}

int cmd_generate(const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed) {
  const fs::path out(out_dir);
  std::string text;
  bool is_suite = true;
  if (config_path.empty()) {
    fringe::synth::SuiteSpec suite;
    if (seed) suite.base_seed = *seed;
    text = fringe::synth::to_json_text(suite);
  } else {
    text = read_text_file(config_path);
    is_suite = fringe::synth::json_text_is_suite(text);
  }

  if (is_suite) {
    fringe::synth::SuiteSpec suite = fringe::synth::suite_spec_from_json_text(text);
    if (seed) suite.base_seed = *seed;
    const std::vector<fringe::synth::SuitePair> items = fringe::synth::build_suite(suite);
    fs::create_directories(out);
    write_text_file(out / "suite.json", fringe::synth::to_json_text(suite));
    for (const fringe::synth::SuitePair& item : items) {
      write_pair_dir(out / pair_label(item.pattern_id, item.spec.noise.sigma, item.spec.step),
                     item.spec);
    }
    std::cout << "wrote " << items.size() << " pair directories under " << out.string() << "\n";
  } else {
    fringe::synth::PairSpec spec = fringe::synth::pair_spec_from_json_text(text);
    if (seed) spec.noise.seed = *seed;
    write_pair_dir(out, spec);
    std::cout << "wrote pair files under " << out.string() << "\n";
  }
  return 0;
}

int cmd_normalize(const std::string& input, const std::string& out_dir,
                  const PipelineFlags& flags, bool dump) {
  const fringe::bench::PipelineConfig cfg = build_pipeline_config(flags);
  const fringe::ScalarField image = fringe::load_field(input);
  const fringe::gfb::Normalizer norm(cfg.gfb);
  const fringe::gfb::GfbResponse response = norm.run(image);

  const fs::path out(out_dir);
  fs::create_directories(out);
  fringe::save_field(response.normalized, (out / "normalized.pfm").string());
  if (cfg.blend_sigma) {
    fringe::save_field(fringe::gfb::low_freq_blend(response, image, *cfg.blend_sigma),
                       (out / "blended.pfm").string());
  }
  if (dump) {
    fringe::save_field(response.magnitude, (out / "magnitude.pfm").string());
    fringe::save_field(response.phase, (out / "phase.pfm").string());
    std::string winners;
    for (int r = 0; r < response.height(); ++r) {
      for (int c = 0; c < response.width(); ++c) {
        if (c) winners += ',';
        winners += std::to_string(response.winner[static_cast<std::size_t>(r) *
                                                  response.width() + c]);
      }
      winners += '\n';
    }
    write_text_file(out / "winner.csv", winners);
  }

  json report;
  report["input"] = input;
  report["out"] = out.string();
  report["kernels"] = norm.bank().size();
  report["max_half_extent"] = norm.max_half_extent();
  std::cout << report.dump(2) << "\n";
  return 0;
}

// Single-pair commands propagate a total failure with per-method attribution;
// sweeps instead keep degraded rows so one bad pair cannot lose the table.
void require_any_method(const fringe::bench::PairRun& run) {
  bool any_ok = run.methods.empty();
  bool all_degenerate = true;
  std::string detail;
  for (const fringe::bench::MethodRun& m : run.methods) {
    if (m.ok) {
      any_ok = true;
      continue;
    }
    all_degenerate = all_degenerate && m.degenerate_failure;
    if (!detail.empty()) detail += "; ";
    detail += std::string(fringe::demod::method_name(m.method)) + ": " + m.status;
  }
  if (any_ok) return;
  if (all_degenerate) throw fringe::degeneracy_error("every method failed: " + detail);
  throw fringe::data_error("every method failed: " + detail);
}

int cmd_estimate_step(const PairInputs& inputs, const PipelineFlags& flags,
                      const std::string& out_path) {
  const fringe::bench::PipelineConfig cfg = build_pipeline_config(flags);
  const fringe::synth::InterferogramPair pair = load_pair(inputs);
  const fringe::bench::PairRun run = fringe::bench::run_pair(pair, cfg);
  require_any_method(run);

  json report;
  report["border_crop"] = run.border_crop;
  report["normalize_ms"] = run.normalize_ms;
  report["samples"] = run.cloud.count();
  report["methods"] = json::array();
  for (const fringe::bench::MethodRun& m : run.methods) {
    report["methods"].push_back(method_report(m));
  }
  emit_report(report, out_path);
  return 0;
}

int cmd_demodulate(const PairInputs& inputs, const PipelineFlags& flags,
                   const std::string& out_dir, bool dump) {
  fringe::bench::PipelineConfig cfg = build_pipeline_config(flags);
  cfg.keep_responses = dump;
  const fringe::synth::InterferogramPair pair = load_pair(inputs);
  const fringe::bench::PairRun run = fringe::bench::run_pair(pair, cfg);
  require_any_method(run);

  const fs::path out(out_dir);
  fs::create_directories(out);

  json report;
  report["border_crop"] = run.border_crop;
  report["normalize_ms"] = run.normalize_ms;
  report["samples"] = run.cloud.count();
  report["methods"] = json::array();
  for (const fringe::bench::MethodRun& m : run.methods) {
    json j = method_report(m);
    if (m.ok) {
      const std::string name = std::string("phase_") + fringe::demod::method_name(m.method) +
                               ".pfm";
      fringe::save_field(m.map.phase, (out / name).string());
      j["phase_map"] = name;
    }
    report["methods"].push_back(std::move(j));
  }

  if (dump) {
    fringe::save_field(run.n1, (out / "normalized1.pfm").string());
    fringe::save_field(run.n2, (out / "normalized2.pfm").string());
    const auto dump_response = [&](const std::optional<fringe::gfb::GfbResponse>& r, int which) {
      if (!r) return;
      const std::string tag = std::to_string(which);
      fringe::save_field(r->magnitude, (out / ("gfb_magnitude" + tag + ".pfm")).string());
      fringe::save_field(r->phase, (out / ("gfb_phase" + tag + ".pfm")).string());
    };
    dump_response(run.response1, 1);
    dump_response(run.response2, 2);
    std::string cloud_csv = "x,y\n";
    char buf[80];
    for (std::size_t i = 0; i < run.cloud.count(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", run.cloud.x[i], run.cloud.y[i]);
      cloud_csv += buf;
    }
    write_text_file(out / "cloud.csv", cloud_csv);
  }

  write_text_file(out / "report.json", report.dump(2) + "\n");
  std::cout << report.dump(2) << "\n";
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              std::optional<std::uint64_t> seed, int jobs, const PipelineFlags& flags) {
  fringe::synth::SuiteSpec suite;
  fringe::bench::PipelineConfig cfg;
  if (!config_path.empty()) {
    const json root = parse_json_file(config_path);
    try {
      if (root.contains("suite")) {
        suite = fringe::synth::suite_spec_from_json_text(root.dump());
      }
      apply_pipeline_json(root, cfg);
    } catch (const json::exception& e) {
      throw fringe::data_error(config_path + ": " + e.what());
    }
  }
  // Flag overrides reuse the same precedence as the other subcommands.
  PipelineFlags merged = flags;
  merged.config_path.clear();
  const fringe::bench::PipelineConfig flag_cfg = build_pipeline_config(merged);
  if (flags.stride) cfg.stride = flag_cfg.stride;
  if (flags.border_crop) cfg.border_crop = flag_cfg.border_crop;
  if (flags.kappa) cfg.robust.kappa = flag_cfg.robust.kappa;
  if (flags.iterations) cfg.robust.max_iterations = flag_cfg.robust.max_iterations;
  if (flags.blend_sigma) cfg.blend_sigma = flag_cfg.blend_sigma;
  if (!flags.methods.empty()) cfg.methods = flag_cfg.methods;
  if (flags.skip_normalize) cfg.skip_normalize = true;
  if (flags.piston_removal) cfg.piston_removal = true;
  if (seed) suite.base_seed = *seed;

  const std::vector<fringe::bench::SweepRow> rows = fringe::bench::run_sweep(suite, cfg, jobs);
  fringe::bench::write_sweep_outputs(rows, out_dir);
  std::cout << "wrote " << rows.size() << " rows under " << out_dir << "\n";
  return 0;
}

int cmd_compare(const PairInputs& inputs, const PipelineFlags& flags,
                const std::string& out_dir) {
  fringe::bench::PipelineConfig cfg = build_pipeline_config(flags);
  cfg.methods = {fringe::demod::Method::Lef5Term, fringe::demod::Method::SlefLs,
                 fringe::demod::Method::SlefRe};
  const fringe::synth::InterferogramPair pair = load_pair(inputs);
  if (!pair.truth_phase) {
    throw fringe::data_error("compare: ground-truth phase required (--pair dir with "
                             "truth_phase.pfm, or --truth-phase)");
  }
  const fringe::bench::PairRun run = fringe::bench::run_pair(pair, cfg);
  require_any_method(run);
  const fringe::ScalarField truth = wrapped_truth_of(pair);

  const fs::path out(out_dir);
  fs::create_directories(out);

  json report;
  report["border_crop"] = run.border_crop;
  report["variants"] = json::array();

  const auto score = [&](const fringe::demod::PhaseMapResult& map, const std::string& label,
                         const char* method, const char* formula, double delta) {
    const fringe::demod::ErrorReport raw = fringe::demod::wrapped_error(map, truth, false);
    const fringe::demod::ErrorReport centered = fringe::demod::wrapped_error(map, truth, true);
    const fringe::demod::ErrorReport& shown = cfg.piston_removal ? centered : raw;
    const std::string map_name = "error_" + label + ".pfm";
    fringe::save_field(shown.error_map, (out / map_name).string());
    json j;
    j["method"] = method;
    j["formula"] = formula;
    j["delta"] = delta;
    j["mae_raw"] = raw.mae;
    j["mae_piston_removed"] = centered.mae;
    j["piston"] = centered.piston;
    j["error_map"] = map_name;
    report["variants"].push_back(std::move(j));
  };

  for (const fringe::bench::MethodRun& m : run.methods) {
    if (!m.ok) {
      json j;
      j["method"] = fringe::demod::method_name(m.method);
      j["ok"] = false;
      j["status"] = m.status;
      report["variants"].push_back(std::move(j));
      continue;
    }
    if (m.method == fringe::demod::Method::Lef5Term) {
      // The fold-prone single-arctangent map, evaluated in the same centered
      // ellipse coordinates the fit saw.
      fringe::ScalarField x_field = fringe::scale_offset(fringe::add(run.n1, run.n2), 1.0,
                                                         -run.cloud.mean_x);
      fringe::ScalarField y_field = fringe::scale_offset(fringe::sub(run.n1, run.n2), 1.0,
                                                         -run.cloud.mean_y);
      fringe::demod::PhaseMapResult fold = fringe::demod::phase_lef(x_field, y_field, *m.fit5,
                                                                    m.delta);
      fringe::demod::mask_border(fold, run.border_crop);
      score(fold, "LEF-5term_fold", "LEF-5term", "single-arctangent", m.delta);
    }
    score(m.map, std::string(fringe::demod::method_name(m.method)) + "_two-step",
          fringe::demod::method_name(m.method), "two-step", m.delta);
  }

  write_text_file(out / "compare.json", report.dump(2) + "\n");
  std::cout << report.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-frame fringe-pattern phase step and phase map recovery"};
  app.require_subcommand(1);
  std::string backend = "auto";
  app.add_option("--backend", backend, "compute backend: auto, scalar, avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  // generate
  CLI::App* generate = app.add_subcommand(
      "generate", "render synthetic interferogram pairs with ground truth");
  std::string gen_config;
  std::string gen_out = "pairs";
  std::optional<std::uint64_t> gen_seed;
  generate->add_option("--config", gen_config, "pair or suite spec (JSON)");
  generate->add_option("--out", gen_out, "output directory");
  generate->add_option("--seed", gen_seed, "override the spec's seed");

  // normalize
  CLI::App* normalize = app.add_subcommand(
      "normalize", "filter-bank normalize one interferogram");
  std::string norm_input;
  std::string norm_out = "normalized";
  bool norm_dump = false;
  PipelineFlags norm_flags;
  normalize->add_option("input", norm_input, "interferogram image (pfm/png/csv)")->required();
  normalize->add_option("--out", norm_out, "output directory");
  normalize->add_flag("--dump-intermediates", norm_dump, "also write magnitude/phase/winner");
  add_pipeline_flags(normalize, norm_flags);

  // estimate-step
  CLI::App* estimate = app.add_subcommand(
      "estimate-step", "recover the phase step between two frames");
  PairInputs est_inputs;
  PipelineFlags est_flags;
  std::string est_out;
  add_pair_inputs(estimate, est_inputs);
  add_pipeline_flags(estimate, est_flags);
  estimate->add_option("--out", est_out, "write the JSON report here instead of stdout");

  // demodulate
  CLI::App* demodulate = app.add_subcommand(
      "demodulate", "recover the phase step and the full phase map");
  PairInputs dem_inputs;
  PipelineFlags dem_flags;
  std::string dem_out = "demodulated";
  bool dem_dump = false;
  add_pair_inputs(demodulate, dem_inputs);
  add_pipeline_flags(demodulate, dem_flags);
  demodulate->add_option("--out", dem_out, "output directory");
  demodulate->add_flag("--dump-intermediates", dem_dump,
                       "also write normalized frames, bank outputs and the point cloud");

  // sweep
  CLI::App* sweep = app.add_subcommand(
      "sweep", "run the benchmark suite and write CSV tables");
  std::string sweep_out = "sweep_out";
  std::optional<std::uint64_t> sweep_seed;
  int sweep_jobs = 0;
  PipelineFlags sweep_flags;
  sweep->add_option("--out", sweep_out, "output directory");
  sweep->add_option("--seed", sweep_seed, "override the suite's base seed");
  sweep->add_option("--jobs", sweep_jobs, "worker threads (0 = auto)");
  add_pipeline_flags(sweep, sweep_flags);

  // compare
  CLI::App* compare = app.add_subcommand(
      "compare", "score every estimator variant against the ground-truth phase");
  PairInputs cmp_inputs;
  PipelineFlags cmp_flags;
  std::string cmp_out = "compared";
  add_pair_inputs(compare, cmp_inputs);
  add_pipeline_flags(compare, cmp_flags);
  compare->add_option("--out", cmp_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (backend == "scalar") {
      fringe::kernels::set_backend(fringe::kernels::Backend::Scalar);
    } else if (backend == "avx2") {
      fringe::kernels::set_backend(fringe::kernels::Backend::Avx2);
    }

    if (generate->parsed()) return cmd_generate(gen_config, gen_out, gen_seed);
    if (normalize->parsed()) return cmd_normalize(norm_input, norm_out, norm_flags, norm_dump);
    if (estimate->parsed()) return cmd_estimate_step(est_inputs, est_flags, est_out);
    if (demodulate->parsed()) return cmd_demodulate(dem_inputs, dem_flags, dem_out, dem_dump);
    if (sweep->parsed()) return cmd_sweep(sweep_flags.config_path, sweep_out, sweep_seed,
                                          sweep_jobs, sweep_flags);
    if (compare->parsed()) return cmd_compare(cmp_inputs, cmp_flags, cmp_out);
    return 1;
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const fringe::degeneracy_error& e) {
    std::cerr << "degeneracy: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
