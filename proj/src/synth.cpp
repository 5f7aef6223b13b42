#include "fringe/synth.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

#include "fringe/errors.hpp"
#include "fringe/rng.hpp"

namespace fringe::synth {
namespace {

using nlohmann::json;

constexpr double kPi = std::numbers::pi;

void check_size(int width, int height) {
  if (width < 16 || height < 16) {
    throw std::invalid_argument("synth: dimensions must be at least 16x16, got " +
                                std::to_string(width) + "x" + std::to_string(height));
  }
}

void check_step(double step) {
  if (!(step > 0.0) || !(step < kPi)) {
    throw std::domain_error("synth: phase step " + std::to_string(step) +
                            " must lie strictly inside (0, pi)");
  }
}

void check_modulation(const ModulationSpec& m, bool strictly_positive, const char* role) {
  const bool base_ok = strictly_positive ? m.base > 0.0 : m.base >= 0.0;
  if (!base_ok || !std::isfinite(m.base)) {
    throw std::invalid_argument(std::string("synth: ") + role + " base must be " +
                                (strictly_positive ? "> 0" : ">= 0"));
  }
  if (!(m.drift > 0.0) || !std::isfinite(m.drift)) {
    throw std::invalid_argument(std::string("synth: ") + role + " drift must be > 0");
  }
  if (m.envelope_width < 0.0 || !std::isfinite(m.envelope_width)) {
    throw std::invalid_argument(std::string("synth: ") + role + " envelope width must be >= 0");
  }
}

void check_phase(const PhaseSpec& p) {
  if (p.kind == PhaseKind::GaussianPeaks) {
    for (const GaussianPeak& peak : p.peaks) {
      if (!(peak.width > 0.0)) {
        throw std::invalid_argument("synth: gaussian peak width must be > 0");
      }
    }
  }
}

}  // namespace

ScalarField phase_field(const PhaseSpec& spec, int width, int height) {
  check_size(width, height);
  check_phase(spec);
  ScalarField phi(width, height);
  switch (spec.kind) {
    case PhaseKind::RadialQuadratic: {
      const double cx = spec.center_x * (width - 1);
      const double cy = spec.center_y * (height - 1);
      for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
          const double dx = c - cx;
          const double dy = r - cy;
          phi.at(r, c) = spec.curvature * (dx * dx + dy * dy) + spec.offset;
        }
      }
      break;
    }
    case PhaseKind::GaussianPeaks: {
      // Peaks ride on an optional carrier; bump gradients then push the local
      // frequency above or below the carrier's, which is how the benchmark
      // suite plants controlled off-band pockets.
      for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
          double v = spec.offset + spec.frequency_x * c + spec.frequency_y * r;
          for (const GaussianPeak& peak : spec.peaks) {
            const double dx = c - peak.center_x * (width - 1);
            const double dy = r - peak.center_y * (height - 1);
            v += peak.amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * peak.width * peak.width));
          }
          phi.at(r, c) = v;
        }
      }
      break;
    }
    case PhaseKind::LinearCarrier: {
      for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
          phi.at(r, c) = spec.offset + spec.frequency_x * c + spec.frequency_y * r;
        }
      }
      break;
    }
  }
  phi.ensure_finite();
  return phi;
}

ScalarField modulation_field(const ModulationSpec& spec, int width, int height, int frame_index) {
  check_size(width, height);
  if (frame_index != 1 && frame_index != 2) {
    throw std::invalid_argument("synth: frame index must be 1 or 2");
  }
  const double level = spec.base * (frame_index == 2 ? spec.drift : 1.0);
  if (spec.envelope_width <= 0.0) return ScalarField(width, height, level);
  ScalarField f(width, height);
  const double cx = spec.envelope_center_x * (width - 1);
  const double cy = spec.envelope_center_y * (height - 1);
  const double denom = 2.0 * spec.envelope_width * spec.envelope_width;
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const double dx = c - cx;
      const double dy = r - cy;
      f.at(r, c) = level * std::exp(-(dx * dx + dy * dy) / denom);
    }
  }
  return f;
}

InterferogramPair generate_pair(const PhaseSpec& phase, const ModulationSpec& background,
                                const ModulationSpec& amplitude, const NoiseSpec& noise,
                                double step, int width, int height) {
  check_size(width, height);
  check_step(step);
  check_modulation(background, false, "background");
  check_modulation(amplitude, true, "amplitude");
  if (noise.sigma < 0.0 || !std::isfinite(noise.sigma)) {
    throw std::invalid_argument("synth: noise sigma must be >= 0");
  }

  const ScalarField phi = phase_field(phase, width, height);
  InterferogramPair pair;
  for (int k = 1; k <= 2; ++k) {
    const ScalarField a = modulation_field(background, width, height, k);
    const ScalarField b = modulation_field(amplitude, width, height, k);
    const double delta_k = k == 1 ? 0.0 : step;
    const std::uint64_t frame_seed = rng::mix(noise.seed, static_cast<std::uint64_t>(k));
    std::vector<double> samples(phi.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      double v = a.data()[i] + b.data()[i] * std::cos(phi.data()[i] + delta_k);
      if (noise.sigma > 0.0) v += noise.sigma * rng::gaussian_at(frame_seed, i);
      samples[i] = v;
    }
    ScalarField frame = ScalarField::from_samples(width, height, std::move(samples));
    if (k == 1) {
      pair.frame1 = std::move(frame);
    } else {
      pair.frame2 = std::move(frame);
    }
  }
  pair.truth_phase = phi;
  pair.truth_step = step;
  return pair;
}

InterferogramPair generate_pair(const PairSpec& spec) {
  return generate_pair(spec.phase, spec.background, spec.amplitude, spec.noise, spec.step,
                       spec.width, spec.height);
}

std::vector<SuitePair> build_suite(const SuiteSpec& spec) {
  check_size(spec.width, spec.height);
  // families == 0 is a legal empty suite (useful for header-only sweep runs).
  if (spec.families < 0) throw std::invalid_argument("synth: family count must be >= 0");
  for (double s : spec.steps) check_step(s);

  const double extent = static_cast<double>(std::max(spec.width, spec.height));
  std::vector<SuitePair> out;
  out.reserve(static_cast<std::size_t>(spec.families) * spec.noise_sigmas.size() *
              spec.steps.size());
  for (int f = 0; f < spec.families; ++f) {
    const std::uint64_t fs = rng::mix(spec.base_seed, 1000ULL + static_cast<std::uint64_t>(f));
    const auto u = [fs](std::uint64_t j) { return rng::uniform_at(fs, j); };

    // Each family is a tilted plane-wave carrier whose period matches the
    // longest default filter so the in-band bulk normalizes as cleanly as
    // possible, lit through an off-center Gaussian envelope. The far side of
    // the envelope carries almost no fringe amplitude, so additive noise
    // swamps it there and the normalized values decorrelate between frames;
    // those points land far off the Lissajous ellipse. That graded
    // contamination is the regime that separates the robust fit from plain
    // least squares. Families cycle through three desert sizes so the suite
    // spans mild to heavy contamination.
    PairSpec base;
    base.width = spec.width;
    base.height = spec.height;
    base.phase.kind = PhaseKind::GaussianPeaks;
    const double period = 24.0 + 2.0 * u(0);
    const double freq = 2.0 * kPi / period;
    const double angle = kPi * u(1);
    base.phase.frequency_x = freq * std::cos(angle);
    base.phase.frequency_y = freq * std::sin(angle);
    base.phase.offset = 2.0 * kPi * u(2);
    base.background.base = 0.4 + 0.3 * u(30);
    base.background.envelope_center_x = 0.25 + 0.5 * u(31);
    base.background.envelope_center_y = 0.25 + 0.5 * u(32);
    base.background.envelope_width = (0.7 + 0.6 * u(33)) * extent;
    base.background.drift = 0.92 + 0.16 * u(34);
    base.amplitude.base = 0.75 + 0.25 * u(35);
    base.amplitude.envelope_center_x = u(36) < 0.5 ? 0.20 + 0.08 * u(38) : 0.80 - 0.08 * u(38);
    base.amplitude.envelope_center_y = u(37) < 0.5 ? 0.20 + 0.08 * u(39) : 0.80 - 0.08 * u(39);
    base.amplitude.envelope_width = (0.44 + 0.04 * (f % 3) + 0.02 * u(40)) * extent;
    base.amplitude.drift = 0.9 + 0.2 * u(41);

    char id[16];
    std::snprintf(id, sizeof id, "p%02d", f);
    for (std::size_t si = 0; si < spec.noise_sigmas.size(); ++si) {
      for (std::size_t sj = 0; sj < spec.steps.size(); ++sj) {
        PairSpec ps = base;
        ps.step = spec.steps[sj];
        ps.noise.sigma = spec.noise_sigmas[si];
        ps.noise.seed = rng::mix(spec.base_seed, (static_cast<std::uint64_t>(f) + 1) * 1000003ULL +
                                                     si * 1009ULL + sj);
        out.push_back(SuitePair{id, ps});
      }
    }
  }
  return out;
}

std::vector<SuitePair> benchmark_suite(int width, int height) {
  SuiteSpec spec;
  spec.width = width;
  spec.height = height;
  return build_suite(spec);
}

namespace {

json phase_to_json(const PhaseSpec& p) {
  json j;
  j["offset"] = p.offset;
  switch (p.kind) {
    case PhaseKind::RadialQuadratic:
      j["kind"] = "radial-quadratic";
      j["center"] = {p.center_x, p.center_y};
      j["curvature"] = p.curvature;
      break;
    case PhaseKind::GaussianPeaks: {
      j["kind"] = "gaussian-peaks";
      j["frequency"] = {p.frequency_x, p.frequency_y};
      json peaks = json::array();
      for (const GaussianPeak& peak : p.peaks) {
        peaks.push_back({{"amplitude", peak.amplitude},
                         {"center", {peak.center_x, peak.center_y}},
                         {"width", peak.width}});
      }
      j["peaks"] = std::move(peaks);
      break;
    }
    case PhaseKind::LinearCarrier:
      j["kind"] = "linear-carrier";
      j["frequency"] = {p.frequency_x, p.frequency_y};
      break;
  }
  return j;
}

PhaseSpec phase_from_json(const json& j) {
  PhaseSpec p;
  p.offset = j.value("offset", 0.0);
  const std::string kind = j.value("kind", "radial-quadratic");
  if (kind == "radial-quadratic") {
    p.kind = PhaseKind::RadialQuadratic;
    if (j.contains("center")) {
      p.center_x = j.at("center").at(0).get<double>();
      p.center_y = j.at("center").at(1).get<double>();
    }
    p.curvature = j.value("curvature", 0.0025);
  } else if (kind == "gaussian-peaks") {
    p.kind = PhaseKind::GaussianPeaks;
    if (j.contains("frequency")) {
      p.frequency_x = j.at("frequency").at(0).get<double>();
      p.frequency_y = j.at("frequency").at(1).get<double>();
    }
    for (const json& pj : j.value("peaks", json::array())) {
      GaussianPeak peak;
      peak.amplitude = pj.value("amplitude", 1.0);
      if (pj.contains("center")) {
        peak.center_x = pj.at("center").at(0).get<double>();
        peak.center_y = pj.at("center").at(1).get<double>();
      }
      peak.width = pj.value("width", 32.0);
      p.peaks.push_back(peak);
    }
  } else if (kind == "linear-carrier") {
    p.kind = PhaseKind::LinearCarrier;
    if (j.contains("frequency")) {
      p.frequency_x = j.at("frequency").at(0).get<double>();
      p.frequency_y = j.at("frequency").at(1).get<double>();
    }
  } else {
    throw data_error("spec: unknown phase kind '" + kind + "'");
  }
  return p;
}

json modulation_to_json(const ModulationSpec& m) {
  return json{{"base", m.base},
              {"envelope_center", {m.envelope_center_x, m.envelope_center_y}},
              {"envelope_width", m.envelope_width},
              {"drift", m.drift}};
}

ModulationSpec modulation_from_json(const json& j) {
  ModulationSpec m;
  m.base = j.value("base", 1.0);
  if (j.contains("envelope_center")) {
    m.envelope_center_x = j.at("envelope_center").at(0).get<double>();
    m.envelope_center_y = j.at("envelope_center").at(1).get<double>();
  }
  m.envelope_width = j.value("envelope_width", 0.0);
  m.drift = j.value("drift", 1.0);
  return m;
}

json pair_to_json(const PairSpec& spec) {
  json j;
  j["size"] = {spec.width, spec.height};
  j["step"] = spec.step;
  j["phase"] = phase_to_json(spec.phase);
  j["background"] = modulation_to_json(spec.background);
  j["amplitude"] = modulation_to_json(spec.amplitude);
  j["noise"] = json{{"sigma", spec.noise.sigma}, {"seed", spec.noise.seed}};
  return j;
}

PairSpec pair_from_json(const json& j) {
  PairSpec spec;
  if (j.contains("size")) {
    spec.width = j.at("size").at(0).get<int>();
    spec.height = j.at("size").at(1).get<int>();
  }
  spec.step = j.value("step", spec.step);
  if (j.contains("phase")) spec.phase = phase_from_json(j.at("phase"));
  if (j.contains("background")) spec.background = modulation_from_json(j.at("background"));
  if (j.contains("amplitude")) spec.amplitude = modulation_from_json(j.at("amplitude"));
  if (j.contains("noise")) {
    spec.noise.sigma = j.at("noise").value("sigma", 0.0);
    spec.noise.seed = j.at("noise").value("seed", std::uint64_t{0});
  }
  return spec;
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw data_error(std::string("spec: JSON parse failure: ") + e.what());
  }
}

}  // namespace

std::string to_json_text(const PairSpec& spec) {
  return json{{"pair", pair_to_json(spec)}}.dump(2) + "\n";
}

std::string to_json_text(const SuiteSpec& spec) {
  json j;
  j["size"] = {spec.width, spec.height};
  j["families"] = spec.families;
  j["noise_sigmas"] = spec.noise_sigmas;
  j["steps"] = spec.steps;
  j["base_seed"] = spec.base_seed;
  return json{{"suite", std::move(j)}}.dump(2) + "\n";
}

PairSpec pair_spec_from_json_text(const std::string& text) {
  const json root = parse_text(text);
  if (!root.contains("pair")) throw data_error("spec: missing top-level \"pair\" object");
  try {
    return pair_from_json(root.at("pair"));
  } catch (const json::exception& e) {
    throw data_error(std::string("spec: malformed pair spec: ") + e.what());
  }
}

SuiteSpec suite_spec_from_json_text(const std::string& text) {
  const json root = parse_text(text);
  if (!root.contains("suite")) throw data_error("spec: missing top-level \"suite\" object");
  const json& j = root.at("suite");
  SuiteSpec spec;
  try {
    if (j.contains("size")) {
      spec.width = j.at("size").at(0).get<int>();
      spec.height = j.at("size").at(1).get<int>();
    }
    spec.families = j.value("families", spec.families);
    if (j.contains("noise_sigmas")) {
      spec.noise_sigmas = j.at("noise_sigmas").get<std::vector<double>>();
    }
    if (j.contains("steps")) spec.steps = j.at("steps").get<std::vector<double>>();
    spec.base_seed = j.value("base_seed", spec.base_seed);
  } catch (const json::exception& e) {
    throw data_error(std::string("spec: malformed suite spec: ") + e.what());
  }
  return spec;
}

bool json_text_is_suite(const std::string& text) {
  const json root = parse_text(text);
  if (root.contains("suite")) return true;
  if (root.contains("pair")) return false;
  throw data_error("spec: expected a top-level \"pair\" or \"suite\" object");
}

}  // namespace fringe::synth
