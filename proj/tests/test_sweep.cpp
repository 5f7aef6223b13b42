#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "fringe/sweep.hpp"

#include "support.hpp"

namespace bench = fringe::bench;
namespace synth = fringe::synth;
using testsup::kPi;

namespace {

// Smallest frames the widest default filter still fits; the suite carriers
// are tuned near the longest bank period, so the bank must stay complete.
synth::SuiteSpec small_suite() {
  synth::SuiteSpec suite;
  suite.width = 128;
  suite.height = 128;
  suite.families = 2;
  suite.noise_sigmas = {0.0, 0.5};
  suite.steps = {kPi / 3.0, kPi / 2.0};
  suite.base_seed = 3;
  return suite;
}

bench::PipelineConfig small_config() { return bench::PipelineConfig{}; }

bool rows_equal_modulo_wall(const std::vector<bench::SweepRow>& a,
                            const std::vector<bench::SweepRow>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].pattern_id != b[i].pattern_id || a[i].noise_sigma != b[i].noise_sigma ||
        a[i].true_delta != b[i].true_delta || a[i].method != b[i].method ||
        a[i].ok != b[i].ok || a[i].status != b[i].status ||
        a[i].estimated_delta != b[i].estimated_delta ||
        a[i].delta_abs_error != b[i].delta_abs_error || a[i].phase_mae != b[i].phase_mae ||
        a[i].iterations != b[i].iterations) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_SUITE("sweep") {

TEST_CASE("a fixed suite sweeps to identical rows across runs and thread counts") {
  const synth::SuiteSpec suite = small_suite();
  const bench::PipelineConfig cfg = small_config();

  const std::vector<bench::SweepRow> serial = bench::run_sweep(suite, cfg, 1);
  REQUIRE(serial.size() == 2 * 2 * 2 * 3);  // families x noise x steps x methods

  const std::vector<bench::SweepRow> again = bench::run_sweep(suite, cfg, 1);
  CHECK(rows_equal_modulo_wall(serial, again));

  const std::vector<bench::SweepRow> threaded = bench::run_sweep(suite, cfg, 3);
  CHECK(rows_equal_modulo_wall(serial, threaded));

  SUBCASE("rows come back sorted by pattern, noise, step, method") {
    for (std::size_t i = 1; i < serial.size(); ++i) {
      const auto key = [](const bench::SweepRow& r) {
        return std::tie(r.pattern_id, r.noise_sigma, r.true_delta, r.method);
      };
      CHECK(key(serial[i - 1]) < key(serial[i]));
    }
  }

  SUBCASE("every method appears once per pair and clean pairs succeed") {
    // The 50 px border crop leaves a 28x28 interior at this frame size, so
    // noisy pairs estimate from few samples and get a looser bound.
    for (const bench::SweepRow& r : serial) {
      CHECK(r.ok);
      CHECK(r.status == "ok");
      CHECK(r.delta_abs_error < (r.noise_sigma == 0.0 ? 0.02 : 0.3));
    }
  }
}

TEST_CASE("sweep csv carries the version stamp, schema and one line per row") {
  const std::vector<bench::SweepRow> rows = bench::run_sweep(small_suite(), small_config(), 0);
  const std::string csv = bench::sweep_csv_text(rows);

  std::istringstream in(csv);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "# fringe sweep-csv v1");
  REQUIRE(std::getline(in, line));
  CHECK(line ==
        "pattern_id,noise_sigma,true_delta,method,estimated_delta,delta_abs_error,"
        "phase_mae,iterations,wall_time_ms,status");
  std::size_t body = 0;
  while (std::getline(in, line)) {
    CHECK(line.substr(0, 1) == "p");
    CHECK(std::count(line.begin(), line.end(), ',') == 9);
    ++body;
  }
  CHECK(body == rows.size());
}

TEST_CASE("aggregates average exactly the successful rows of their group") {
  const std::vector<bench::SweepRow> rows = bench::run_sweep(small_suite(), small_config(), 0);
  const std::string agg = bench::aggregate_by_noise_csv_text(rows);

  std::istringstream in(agg);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "# fringe sweep-agg v1");
  REQUIRE(std::getline(in, line));
  CHECK(line == "method,noise_sigma,pairs,delta_err_mean,delta_err_std,phase_mae_mean,"
                "phase_mae_std");

  bool checked_one = false;
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    std::string method, sigma_text, pairs_text, dmean_text;
    std::getline(cells, method, ',');
    std::getline(cells, sigma_text, ',');
    std::getline(cells, pairs_text, ',');
    std::getline(cells, dmean_text, ',');
    const double sigma = std::strtod(sigma_text.c_str(), nullptr);
    const double dmean = std::strtod(dmean_text.c_str(), nullptr);

    double sum = 0.0;
    int n = 0;
    for (const bench::SweepRow& r : rows) {
      if (r.ok && r.method == method && r.noise_sigma == sigma) {
        sum += r.delta_abs_error;
        ++n;
      }
    }
    REQUIRE(n == std::atoi(pairs_text.c_str()));
    CHECK(dmean == doctest::Approx(sum / n).epsilon(1e-9));
    checked_one = true;
  }
  CHECK(checked_one);
}

TEST_CASE("per-method failures become failed rows with empty numeric columns") {
  synth::SuiteSpec suite = small_suite();
  suite.noise_sigmas = {0.5};
  suite.steps = {kPi / 3.0};
  bench::PipelineConfig cfg = small_config();
  cfg.robust.kappa = 1e18;  // rejects everything, so only SLEF-RE fails

  const std::vector<bench::SweepRow> rows = bench::run_sweep(suite, cfg, 0);
  REQUIRE(rows.size() == 6);
  std::size_t failed = 0;
  for (const bench::SweepRow& r : rows) {
    if (r.method == "SLEF-RE") {
      CHECK_FALSE(r.ok);
      CHECK(r.status != "ok");
      CHECK(r.status.find(',') == std::string::npos);  // sanitized for csv
      ++failed;
    } else {
      CHECK(r.ok);
    }
  }
  CHECK(failed == 2);

  const std::string csv = bench::sweep_csv_text(rows);
  CHECK(csv.find(",,,,") != std::string::npos);
}

TEST_CASE("an empty suite produces header-only outputs") {
  synth::SuiteSpec suite = small_suite();
  suite.families = 0;
  const std::vector<bench::SweepRow> rows = bench::run_sweep(suite, small_config(), 0);
  CHECK(rows.empty());
  CHECK(bench::sweep_csv_text(rows) ==
        "# fringe sweep-csv v1\n"
        "pattern_id,noise_sigma,true_delta,method,estimated_delta,delta_abs_error,"
        "phase_mae,iterations,wall_time_ms,status\n");

  testsup::TempDir dir("sweep_empty");
  bench::write_sweep_outputs(rows, dir.path().string());
  CHECK(std::filesystem::exists(dir.path() / "sweep.csv"));
  CHECK(std::filesystem::exists(dir.path() / "sweep_by_noise.csv"));
  CHECK(std::filesystem::exists(dir.path() / "sweep_by_step.csv"));
  CHECK(testsup::slurp(dir.file("sweep_by_step.csv")).substr(0, 21) == "# fringe sweep-agg v1");
}

}  // TEST_SUITE
