#include "fringe/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <utility>

#include "fringe/errors.hpp"

namespace fringe::bench {
namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_ms(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

// Status text lands in a CSV cell; separators would shift columns.
std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

std::vector<SweepRow> rows_for_pair(const synth::SuitePair& item, const PipelineConfig& config,
                                    const gfb::Normalizer* shared) {
  const double sigma = item.spec.noise.sigma;
  const double delta = item.spec.step;
  std::vector<SweepRow> rows;
  try {
    const synth::InterferogramPair pair = synth::generate_pair(item.spec);
    const PairRun run = run_pair(pair, config, shared);
    for (const MethodRun& m : run.methods) {
      SweepRow row;
      row.pattern_id = item.pattern_id;
      row.noise_sigma = sigma;
      row.true_delta = delta;
      row.method = demod::method_name(m.method);
      row.ok = m.ok;
      row.status = m.ok ? "ok" : sanitize(m.status);
      if (m.ok) {
        row.estimated_delta = m.delta;
        row.delta_abs_error = m.delta_abs_error.value_or(0.0);
        row.phase_mae = m.phase_mae.value_or(0.0);
        row.iterations = m.iterations;
      }
      row.wall_ms = run.normalize_ms + m.wall_ms;
      rows.push_back(std::move(row));
    }
  } catch (const std::exception& e) {
    // Pair-level failure: emit one failed row per requested method so the
    // table keeps a fixed shape.
    for (demod::Method method : config.methods) {
      SweepRow row;
      row.pattern_id = item.pattern_id;
      row.noise_sigma = sigma;
      row.true_delta = delta;
      row.method = demod::method_name(method);
      row.ok = false;
      row.status = sanitize(e.what());
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace

std::vector<SweepRow> run_sweep(const synth::SuiteSpec& suite, const PipelineConfig& config,
                                int jobs) {
  const std::vector<synth::SuitePair> items = synth::build_suite(suite);
  if (jobs < 0) throw std::invalid_argument("sweep: job count must be >= 0");
  if (jobs == 0) {
    jobs = static_cast<int>(std::min<unsigned>(std::thread::hardware_concurrency(), 8));
    jobs = std::max(jobs, 1);
  }
  jobs = static_cast<int>(std::min<std::size_t>(jobs, items.size()));

  // One normalizer for every worker: its spectra cache is the expensive part.
  std::optional<gfb::Normalizer> shared;
  if (!config.skip_normalize) shared.emplace(config.gfb);
  const gfb::Normalizer* shared_ptr = shared ? &*shared : nullptr;

  std::vector<std::vector<SweepRow>> per_pair(items.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= items.size()) return;
      per_pair[i] = rows_for_pair(items[i], config, shared_ptr);
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  std::vector<SweepRow> rows;
  for (std::vector<SweepRow>& chunk : per_pair) {
    for (SweepRow& row : chunk) rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.pattern_id, a.noise_sigma, a.true_delta, a.method) <
           std::tie(b.pattern_id, b.noise_sigma, b.true_delta, b.method);
  });
  return rows;
}

std::string sweep_csv_text(const std::vector<SweepRow>& rows) {
  std::string out = "# fringe sweep-csv v1\n";
  out += "pattern_id,noise_sigma,true_delta,method,estimated_delta,delta_abs_error,"
         "phase_mae,iterations,wall_time_ms,status\n";
  for (const SweepRow& r : rows) {
    out += r.pattern_id;
    out += ',' + fmt_double(r.noise_sigma);
    out += ',' + fmt_double(r.true_delta);
    out += ',' + r.method;
    if (r.ok) {
      out += ',' + fmt_double(r.estimated_delta);
      out += ',' + fmt_double(r.delta_abs_error);
      out += ',' + fmt_double(r.phase_mae);
      out += ',' + std::to_string(r.iterations);
    } else {
      out += ",,,,";
    }
    out += ',' + fmt_ms(r.wall_ms);
    out += ',' + r.status;
    out += '\n';
  }
  return out;
}

namespace {

struct Accum {
  std::size_t n = 0;
  double delta_sum = 0.0;
  double delta_sq = 0.0;
  double mae_sum = 0.0;
  double mae_sq = 0.0;
};

std::string aggregate_csv(const std::vector<SweepRow>& rows, bool by_noise) {
  std::map<std::pair<std::string, double>, Accum> groups;
  for (const SweepRow& r : rows) {
    if (!r.ok) continue;
    Accum& a = groups[{r.method, by_noise ? r.noise_sigma : r.true_delta}];
    ++a.n;
    a.delta_sum += r.delta_abs_error;
    a.delta_sq += r.delta_abs_error * r.delta_abs_error;
    a.mae_sum += r.phase_mae;
    a.mae_sq += r.phase_mae * r.phase_mae;
  }

  std::string out = "# fringe sweep-agg v1\n";
  out += std::string("method,") + (by_noise ? "noise_sigma" : "true_delta") +
         ",pairs,delta_err_mean,delta_err_std,phase_mae_mean,phase_mae_std\n";
  for (const auto& [key, a] : groups) {
    const double n = static_cast<double>(a.n);
    const double dmean = a.delta_sum / n;
    const double mmean = a.mae_sum / n;
    const double dvar = std::max(0.0, a.delta_sq / n - dmean * dmean);
    const double mvar = std::max(0.0, a.mae_sq / n - mmean * mmean);
    out += key.first;
    out += ',' + fmt_double(key.second);
    out += ',' + std::to_string(a.n);
    out += ',' + fmt_double(dmean);
    out += ',' + fmt_double(std::sqrt(dvar));
    out += ',' + fmt_double(mmean);
    out += ',' + fmt_double(std::sqrt(mvar));
    out += '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text) || !f.flush()) {
    throw data_error(path.string() + ": write failed");
  }
}

}  // namespace

std::string aggregate_by_noise_csv_text(const std::vector<SweepRow>& rows) {
  return aggregate_csv(rows, true);
}

std::string aggregate_by_step_csv_text(const std::vector<SweepRow>& rows) {
  return aggregate_csv(rows, false);
}

void write_sweep_outputs(const std::vector<SweepRow>& rows, const std::string& dir) {
  const std::filesystem::path base(dir);
  std::filesystem::create_directories(base);
  write_text(base / "sweep.csv", sweep_csv_text(rows));
  write_text(base / "sweep_by_noise.csv", aggregate_by_noise_csv_text(rows));
  write_text(base / "sweep_by_step.csv", aggregate_by_step_csv_text(rows));
}

}  // namespace fringe::bench
