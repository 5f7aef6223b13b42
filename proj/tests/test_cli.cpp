#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fringe/field_io.hpp"
#include "fringe/synth.hpp"

#include "support.hpp"

#include <json.hpp>

namespace synth = fringe::synth;
using testsup::kPi;

namespace {

std::string cli_path() {
  const char* p = std::getenv("FRINGE_CLI");
  return p == nullptr ? std::string() : std::string(p);
}

struct CmdResult {
  int code = -1;
  std::string out;
  std::string err;
};

CmdResult run_cli(const testsup::TempDir& dir, const std::string& args) {
  const std::string out_path = dir.file("stdout.txt");
  const std::string err_path = dir.file("stderr.txt");
  const std::string cmd = cli_path() + " " + args + " > " + out_path + " 2> " + err_path;
  const int raw = std::system(cmd.c_str());
  CmdResult r;
  r.code = (raw != -1 && WIFEXITED(raw)) ? WEXITSTATUS(raw) : -1;
  r.out = testsup::slurp(out_path);
  r.err = testsup::slurp(err_path);
  return r;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// Unit-amplitude zero-background carrier, exact integer fringe counts.
synth::PairSpec ideal_pair_spec(int n, double sigma = 0.0, std::uint64_t seed = 0) {
  synth::PairSpec spec;
  spec.width = n;
  spec.height = n;
  spec.step = kPi / 3.0;
  spec.phase.kind = synth::PhaseKind::LinearCarrier;
  spec.phase.frequency_x = 2.0 * kPi * 8.0 / n;
  spec.phase.frequency_y = -2.0 * kPi * 5.0 / n;
  spec.background.base = 0.0;
  spec.noise.sigma = sigma;
  spec.noise.seed = seed;
  return spec;
}

// wall_time_ms is the only column allowed to vary between identical runs.
std::string mask_wall_column(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#' && line.rfind("pattern_id", 0) != 0) {
      std::vector<std::string> cells;
      std::istringstream row(line);
      std::string cell;
      while (std::getline(row, cell, ',')) cells.push_back(cell);
      if (cells.size() == 10) cells[8] = "masked";
      line.clear();
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
      }
    }
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("binary location is exported and --help exits cleanly") {
  REQUIRE_MESSAGE(!cli_path().empty(), "FRINGE_CLI must point at the fringe binary");
  testsup::TempDir dir("cli_help");
  const CmdResult help = run_cli(dir, "--help");
  CHECK(help.code == 0);
  CHECK(help.out.find("generate") != std::string::npos);
  CHECK(help.out.find("sweep") != std::string::npos);
}

TEST_CASE("argument errors exit with code 1") {
  testsup::TempDir dir("cli_usage");
  CHECK(run_cli(dir, "").code == 1);
  CHECK(run_cli(dir, "--no-such-flag").code == 1);
  CHECK(run_cli(dir, "--backend bogus generate").code == 1);

  const CmdResult conflict = run_cli(
      dir, "estimate-step --pair somewhere --frame1 a.pfm --frame2 b.pfm");
  CHECK(conflict.code == 1);
  CHECK(conflict.err.find("usage error") != std::string::npos);
}

TEST_CASE("malformed configs exit with code 2 and a parse diagnostic") {
  testsup::TempDir dir("cli_badcfg");
  write_text(dir.file("bad.json"), "{ this is not json\n");
  const CmdResult r = run_cli(dir, "generate --config " + dir.file("bad.json") + " --out " +
                                       dir.file("pairs"));
  CHECK(r.code == 2);
  CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("generate writes a reproducible pair directory") {
  testsup::TempDir dir("cli_gen");
  write_text(dir.file("pair.json"), synth::to_json_text(ideal_pair_spec(64, 0.3, 9)));

  CHECK(run_cli(dir, "generate --config " + dir.file("pair.json") + " --out " + dir.file("a"))
            .code == 0);
  for (const char* name : {"frame1.pfm", "frame2.pfm", "truth_phase.pfm", "truth.json"}) {
    CHECK(std::filesystem::exists(dir.path() / "a" / name));
  }

  CHECK(run_cli(dir, "generate --config " + dir.file("pair.json") + " --out " + dir.file("b"))
            .code == 0);
  CHECK(testsup::slurp(dir.file("a") + "/frame1.pfm") ==
        testsup::slurp(dir.file("b") + "/frame1.pfm"));

  CHECK(run_cli(dir, "generate --config " + dir.file("pair.json") + " --seed 123 --out " +
                         dir.file("c"))
            .code == 0);
  CHECK(testsup::slurp(dir.file("a") + "/frame1.pfm") !=
        testsup::slurp(dir.file("c") + "/frame1.pfm"));
}

TEST_CASE("generate expands a suite into labelled pair directories") {
  testsup::TempDir dir("cli_suite");
  synth::SuiteSpec suite;
  suite.width = 64;
  suite.height = 64;
  suite.families = 2;
  suite.noise_sigmas = {0.0, 0.5};
  suite.steps = {kPi / 3.0};
  write_text(dir.file("suite.json"), synth::to_json_text(suite));

  const CmdResult r = run_cli(dir, "generate --config " + dir.file("suite.json") + " --out " +
                                       dir.file("out"));
  CHECK(r.code == 0);
  CHECK(std::filesystem::exists(dir.path() / "out" / "suite.json"));
  std::size_t pair_dirs = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir.path() / "out")) {
    if (entry.is_directory()) {
      ++pair_dirs;
      CHECK(entry.path().filename().string().rfind("p0", 0) == 0);
      CHECK(std::filesystem::exists(entry.path() / "frame1.pfm"));
    }
  }
  CHECK(pair_dirs == 4);
}

TEST_CASE("demodulate recovers the step of a clean generated pair") {
  testsup::TempDir dir("cli_demod");
  write_text(dir.file("pair.json"), synth::to_json_text(ideal_pair_spec(96)));
  REQUIRE(run_cli(dir, "generate --config " + dir.file("pair.json") + " --out " + dir.file("p"))
              .code == 0);

  const CmdResult r = run_cli(dir, "demodulate --pair " + dir.file("p") +
                                       " --skip-normalize --out " + dir.file("d"));
  CHECK(r.code == 0);

  const nlohmann::json report =
      nlohmann::json::parse(testsup::slurp(dir.file("d") + "/report.json"));
  CHECK(report.at("border_crop").get<int>() == 0);
  CHECK(report.at("samples").get<std::size_t>() == 96 * 96);
  REQUIRE(report.at("methods").size() == 3);
  for (const nlohmann::json& m : report.at("methods")) {
    CHECK(m.at("ok").get<bool>());
    CHECK(m.at("delta_abs_error").get<double>() < 1e-6);
    CHECK(std::filesystem::exists(dir.path() / "d" /
                                  m.at("phase_map").get<std::string>()));
  }
}

TEST_CASE("estimate-step reports the step or exits 3 when nothing fits") {
  testsup::TempDir dir("cli_est");
  write_text(dir.file("pair.json"), synth::to_json_text(ideal_pair_spec(96)));
  REQUIRE(run_cli(dir, "generate --config " + dir.file("pair.json") + " --out " + dir.file("p"))
              .code == 0);

  const CmdResult ok = run_cli(dir, "estimate-step --pair " + dir.file("p") +
                                        " --skip-normalize --out " + dir.file("report.json"));
  CHECK(ok.code == 0);
  const nlohmann::json report = nlohmann::json::parse(testsup::slurp(dir.file("report.json")));
  for (const nlohmann::json& m : report.at("methods")) {
    CHECK(m.at("delta").get<double>() == doctest::Approx(kPi / 3.0).epsilon(1e-6));
  }

  fringe::save_field(fringe::ScalarField(32, 32, 0.25), dir.file("flat1.pfm"));
  fringe::save_field(fringe::ScalarField(32, 32, 0.75), dir.file("flat2.pfm"));
  const CmdResult degen = run_cli(dir, "estimate-step --frame1 " + dir.file("flat1.pfm") +
                                           " --frame2 " + dir.file("flat2.pfm") +
                                           " --skip-normalize");
  CHECK(degen.code == 3);
  CHECK(degen.err.find("degeneracy") != std::string::npos);
}

TEST_CASE("normalize writes the normalized frame and optional intermediates") {
  testsup::TempDir dir("cli_norm");
  fringe::save_field(testsup::cosine_field(128, 128, 2.0 * kPi / 10.0, 0.0, 0.0, 0.4, 0.5),
                     dir.file("in.pfm"));
  const CmdResult r = run_cli(dir, "normalize " + dir.file("in.pfm") + " --out " +
                                       dir.file("n") + " --dump-intermediates");
  CHECK(r.code == 0);
  for (const char* name : {"normalized.pfm", "magnitude.pfm", "phase.pfm", "winner.csv"}) {
    CHECK(std::filesystem::exists(dir.path() / "n" / name));
  }
  CHECK(nlohmann::json::parse(r.out).at("kernels").get<int>() == 40);
}

TEST_CASE("sweep reruns are byte-identical apart from wall time") {
  testsup::TempDir dir("cli_sweep");
  synth::SuiteSpec suite;
  suite.width = 128;
  suite.height = 128;
  suite.families = 1;
  suite.noise_sigmas = {0.0, 0.5};
  suite.steps = {kPi / 3.0};
  write_text(dir.file("suite.json"), synth::to_json_text(suite));

  const std::string args = "sweep --config " + dir.file("suite.json") + " --jobs 2 --out ";
  REQUIRE(run_cli(dir, args + dir.file("s1")).code == 0);
  REQUIRE(run_cli(dir, args + dir.file("s2")).code == 0);

  const std::string csv1 = testsup::slurp(dir.file("s1") + "/sweep.csv");
  CHECK(mask_wall_column(csv1) == mask_wall_column(testsup::slurp(dir.file("s2") + "/sweep.csv")));
  CHECK(testsup::slurp(dir.file("s1") + "/sweep_by_noise.csv") ==
        testsup::slurp(dir.file("s2") + "/sweep_by_noise.csv"));
  CHECK(testsup::slurp(dir.file("s1") + "/sweep_by_step.csv") ==
        testsup::slurp(dir.file("s2") + "/sweep_by_step.csv"));

  std::size_t body = 0;
  std::istringstream in(csv1);
  std::string line;
  while (std::getline(in, line)) ++body;
  CHECK(body == 2 + 2 * 3);  // stamp + header + pairs x methods
}

TEST_CASE("sweeping an empty suite still writes the table skeletons") {
  testsup::TempDir dir("cli_sweep_empty");
  synth::SuiteSpec suite;
  suite.families = 0;
  write_text(dir.file("suite.json"), synth::to_json_text(suite));
  const CmdResult r = run_cli(dir, "sweep --config " + dir.file("suite.json") + " --out " +
                                       dir.file("s"));
  CHECK(r.code == 0);
  const std::string csv = testsup::slurp(dir.file("s") + "/sweep.csv");
  CHECK(csv ==
        "# fringe sweep-csv v1\n"
        "pattern_id,noise_sigma,true_delta,method,estimated_delta,delta_abs_error,"
        "phase_mae,iterations,wall_time_ms,status\n");
}

}  // TEST_SUITE
