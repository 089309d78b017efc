// Copyright 2026 tfsyn authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "tfsyn/textures.hpp"

#include <omp.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "json.hpp"
#include "tfsyn/wav.hpp"

namespace tfsyn {

namespace {

using nlohmann::json;

constexpr double kBurstSeconds = 0.010;
constexpr double kBurstTailSeconds = 0.050;
constexpr double kBandpassQ = 5.0;
constexpr double kPeakLevel = 0.9;

void check_range(double v, double lo, double hi, const char* name) {
  if (!(v >= lo && v <= hi))
    throw std::invalid_argument(std::string(name) + " out of range [" +
                                std::to_string(lo) + ", " + std::to_string(hi) +
                                "]");
}

std::vector<double> event_onsets(double rate, double irregularity,
                                 double duration, std::mt19937_64& rng) {
  const int count = static_cast<int>(rate * duration);
  std::normal_distribution<double> jitter(0.0, 1.0);
  std::vector<double> onsets(count);
  for (int k = 0; k < count; ++k) {
    double t = k / rate + irregularity * jitter(rng);
    onsets[k] = std::clamp(t, 0.0, duration - 1e-6);
  }
  return onsets;
}

void normalize_peak(std::vector<double>& samples) {
  double peak = 0.0;
  for (double s : samples) peak = std::max(peak, std::abs(s));
  if (peak > 0.0)
    for (double& s : samples) s *= kPeakLevel / peak;
}

// RBJ cookbook constant-peak-gain bandpass.
struct Biquad {
  double b0, b1, b2, a1, a2;
  double z1 = 0.0, z2 = 0.0;

  static Biquad bandpass(double f0, double q, int sr) {
    const double w0 = 2.0 * kPi * f0 / sr;
    const double alpha = std::sin(w0) / (2.0 * q);
    const double a0 = 1.0 + alpha;
    Biquad bq{alpha / a0, 0.0, -alpha / a0, -2.0 * std::cos(w0) / a0,
              (1.0 - alpha) / a0};
    return bq;
  }

  double tick(double x) {
    const double y = b0 * x + z1;
    z1 = b1 * x - a1 * y + z2;
    z2 = b2 * x - a2 * y;
    return y;
  }
};

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::kPops: return "pops";
    case Family::kChirps: return "chirps";
    case Family::kTones: return "tones";
  }
  throw std::invalid_argument("unknown family");
}

Family family_from_name(const std::string& name) {
  if (name == "pops") return Family::kPops;
  if (name == "chirps") return Family::kChirps;
  if (name == "tones") return Family::kTones;
  throw std::invalid_argument("unknown family: " + name);
}

AudioBuffer gen_pop(const PopSpec& spec, int sample_rate) {
  check_range(spec.rate, 2.0, 16.0, "rate");
  check_range(spec.irregularity, 0.0, 0.4, "irregularity");
  check_range(spec.midi_pitch, 69.0, 81.0, "midi_pitch");
  if (spec.duration <= 0.0) throw std::invalid_argument("duration must be > 0");

  const int n = static_cast<int>(std::lround(spec.duration * sample_rate));
  std::vector<double> out(n, 0.0);
  std::mt19937_64 rng(spec.seed);
  const auto onsets =
      event_onsets(spec.rate, spec.irregularity, spec.duration, rng);

  const int burst_len = static_cast<int>(kBurstSeconds * sample_rate);
  const int event_len =
      burst_len + static_cast<int>(kBurstTailSeconds * sample_rate);
  const double f0 = midi_to_hz(spec.midi_pitch);
  std::uniform_real_distribution<double> white(-1.0, 1.0);

  for (double onset : onsets) {
    const int start = static_cast<int>(onset * sample_rate);
    Biquad bp = Biquad::bandpass(f0, kBandpassQ, sample_rate);
    for (int j = 0; j < event_len; ++j) {
      const double x = j < burst_len ? white(rng) : 0.0;
      const double y = bp.tick(x);
      const int t = start + j;
      if (t < n) out[t] += y;
    }
  }
  normalize_peak(out);
  return {std::move(out), sample_rate};
}

AudioBuffer gen_chirp(const ChirpSpec& spec, int sample_rate) {
  check_range(spec.rate, 2.0, 16.0, "rate");
  check_range(spec.irregularity, 0.0, 0.4, "irregularity");
  check_range(spec.event_duration, 0.02, 0.2, "event_duration");
  check_range(spec.midi_pitch, 69.0, 81.0, "midi_pitch");
  if (spec.duration <= 0.0) throw std::invalid_argument("duration must be > 0");
  if (spec.sweep_octaves != -3 && spec.sweep_octaves != -1 &&
      spec.sweep_octaves != 1 && spec.sweep_octaves != 3)
    throw std::invalid_argument("sweep_octaves must be one of {-3,-1,1,3}");

  const int n = static_cast<int>(std::lround(spec.duration * sample_rate));
  std::vector<double> out(n, 0.0);
  std::mt19937_64 rng(spec.seed);
  const auto onsets =
      event_onsets(spec.rate, spec.irregularity, spec.duration, rng);

  // One deterministic event waveform: two exponential sweeps an octave
  // apart, Hann-enveloped, muted where the sweep crosses Nyquist.
  const int event_len =
      static_cast<int>(std::lround(spec.event_duration * sample_rate));
  const double fc = midi_to_hz(spec.midi_pitch);
  const double s = spec.sweep_octaves;
  const double dur = spec.event_duration;
  const double nyquist_cap = 0.98 * sample_rate / 2.0;
  std::vector<double> event(event_len, 0.0);
  for (double f_start : {fc, 2.0 * fc}) {
    const double k = f_start * dur / (s * std::log(2.0));
    for (int j = 0; j < event_len; ++j) {
      const double tau = static_cast<double>(j) / sample_rate;
      const double freq = f_start * std::pow(2.0, s * tau / dur);
      if (freq > nyquist_cap) continue;
      const double phase = 2.0 * kPi * k * (std::pow(2.0, s * tau / dur) - 1.0);
      const double env =
          0.5 - 0.5 * std::cos(2.0 * kPi * j / std::max(1, event_len - 1));
      event[j] += env * std::sin(phase);
    }
  }

  for (double onset : onsets) {
    const int start = static_cast<int>(onset * sample_rate);
    for (int j = 0; j < event_len && start + j < n; ++j)
      out[start + j] += event[j];
  }
  normalize_peak(out);
  return {std::move(out), sample_rate};
}

AudioBuffer gen_tone(const ToneSpec& spec, int sample_rate) {
  if (spec.midi_pitch < 44 || spec.midi_pitch > 70)
    throw std::invalid_argument("midi_pitch out of range [44, 70]");
  if (spec.num_harmonics < 1)
    throw std::invalid_argument("num_harmonics must be >= 1");
  if (spec.decay_rate < 0.0)
    throw std::invalid_argument("decay_rate must be >= 0");
  if (spec.duration <= 0.0) throw std::invalid_argument("duration must be > 0");
  const double f0 = midi_to_hz(spec.midi_pitch);
  if (f0 * spec.num_harmonics >= sample_rate / 2.0)
    throw std::invalid_argument("harmonics exceed the Nyquist frequency");

  const int n = static_cast<int>(std::lround(spec.duration * sample_rate));
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> uniform(-kPi, kPi);
  std::vector<double> phases(spec.num_harmonics);
  for (double& p : phases) p = uniform(rng);

  std::vector<double> out(n, 0.0);
  for (int h = 1; h <= spec.num_harmonics; ++h) {
    const double w = 2.0 * kPi * h * f0 / sample_rate;
    const double p0 = phases[h - 1];
    for (int t = 0; t < n; ++t)
      out[t] += std::sin(w * t + p0) / h *
                std::exp(-spec.decay_rate * t / sample_rate);
  }
  normalize_peak(out);
  return {std::move(out), sample_rate};
}

namespace {

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i)
    v[i] = count == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (count - 1);
  return v;
}

std::vector<double> subsample_axis(std::vector<double> axis, int keep) {
  if (keep <= 0 || keep >= static_cast<int>(axis.size())) return axis;
  const int n = static_cast<int>(axis.size());
  std::vector<double> out(keep);
  for (int i = 0; i < keep; ++i) {
    const int j = keep == 1 ? (n - 1) / 2
                            : static_cast<int>(std::lround(
                                  static_cast<double>(i) * (n - 1) / (keep - 1)));
    out[i] = axis[j];
  }
  return out;
}

struct Axis {
  std::string name;
  std::vector<double> values;
};

std::vector<Axis> grid_axes(Family family, int keep) {
  switch (family) {
    case Family::kPops:
      return {{"rate", subsample_axis(linspace(2.0, 16.0, 21), keep)},
              {"irregularity", subsample_axis(linspace(0.04, 0.4, 21), keep)},
              {"midi_pitch", subsample_axis(linspace(69.0, 81.0, 21), keep)}};
    case Family::kChirps:
      return {{"irregularity", subsample_axis(linspace(0.04, 0.4, 5), keep)},
              {"rate", subsample_axis(linspace(2.0, 16.0, 9), keep)},
              {"sweep_octaves", subsample_axis({-3.0, -1.0, 1.0, 3.0}, keep)},
              {"event_duration", subsample_axis(linspace(0.02, 0.2, 5), keep)},
              {"midi_pitch", subsample_axis(linspace(69.0, 81.0, 9), keep)}};
    case Family::kTones:
      return {{"midi_pitch", subsample_axis(linspace(44.0, 70.0, 27), keep)},
              {"num_harmonics", subsample_axis({1.0, 4.0, 8.0, 16.0}, keep)},
              {"decay_rate", subsample_axis({0.5, 2.0, 8.0}, keep)}};
  }
  throw std::invalid_argument("unknown family");
}

constexpr int kVariations = 5;

AudioBuffer render_entry(const CorpusEntry& entry, int sample_rate) {
  const auto& p = entry.params;
  switch (entry.family) {
    case Family::kPops:
      return gen_pop({p.at("rate"), p.at("irregularity"), p.at("midi_pitch"),
                      1.0, entry.seed},
                     sample_rate);
    case Family::kChirps: {
      ChirpSpec spec;
      spec.rate = p.at("rate");
      spec.irregularity = p.at("irregularity");
      spec.sweep_octaves = static_cast<int>(p.at("sweep_octaves"));
      spec.event_duration = p.at("event_duration");
      spec.midi_pitch = p.at("midi_pitch");
      spec.seed = entry.seed;
      return gen_chirp(spec, sample_rate);
    }
    case Family::kTones: {
      ToneSpec spec;
      spec.midi_pitch = static_cast<int>(std::lround(p.at("midi_pitch")));
      spec.num_harmonics = static_cast<int>(p.at("num_harmonics"));
      spec.decay_rate = p.at("decay_rate");
      spec.seed = entry.seed;
      return gen_tone(spec, sample_rate);
    }
  }
  throw std::invalid_argument("unknown family");
}

}  // namespace

uint64_t derive_seed(uint64_t master_seed, uint64_t index) {
  // splitmix64 of the (master, index) pair.
  uint64_t z = master_seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

CorpusManifest gen_corpus(Family family, const CorpusOptions& options,
                          const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  const auto axes = grid_axes(family, options.grid_subsample);
  size_t total = kVariations;
  for (const auto& axis : axes) total *= axis.values.size();

  CorpusManifest manifest;
  manifest.entries.resize(total);
  for (size_t i = 0; i < total; ++i) {
    CorpusEntry& e = manifest.entries[i];
    size_t rem = i;
    const int variation = static_cast<int>(rem % kVariations);
    rem /= kVariations;
    e.family = family;
    for (int ax = static_cast<int>(axes.size()) - 1; ax >= 0; --ax) {
      const auto& axis = axes[ax];
      e.params[axis.name] = axis.values[rem % axis.values.size()];
      rem /= axis.values.size();
    }
    e.params["variation"] = variation;
    e.seed = derive_seed(options.master_seed, i);
    char name[64];
    std::snprintf(name, sizeof(name), "%s_%06zu.wav",
                  family_name(family).c_str(), i);
    e.path = name;
  }

  if (!options.manifest_only) {
#pragma omp parallel for schedule(dynamic, 16)
    for (size_t i = 0; i < total; ++i) {
      CorpusEntry& e = manifest.entries[i];
      try {
        AudioBuffer audio = render_entry(e, options.sample_rate);
        write_wav((fs::path(out_dir) / e.path).string(), audio);
      } catch (const std::exception& ex) {
        e.failed = true;
        e.error = ex.what();
      }
    }
  }

  write_manifest((fs::path(out_dir) / "manifest.jsonl").string(), manifest);
  return manifest;
}

void write_manifest(const std::string& path, const CorpusManifest& manifest) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  json header = {{"format_version", manifest.format_version},
                 {"count", manifest.entries.size()}};
  f << header.dump() << "\n";
  for (const auto& e : manifest.entries) {
    json rec = {{"path", e.path},
                {"family", family_name(e.family)},
                {"params", e.params},
                {"seed", e.seed}};
    if (e.failed) rec["error"] = e.error;
    f << rec.dump() << "\n";
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

CorpusManifest read_manifest(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error(path + ": empty manifest");
  json header = json::parse(line);
  CorpusManifest manifest;
  manifest.format_version = header.at("format_version").get<int>();
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    json rec = json::parse(line);
    CorpusEntry e;
    e.path = rec.at("path").get<std::string>();
    e.family = family_from_name(rec.at("family").get<std::string>());
    for (auto& [k, v] : rec.at("params").items())
      e.params[k] = v.get<double>();
    e.seed = rec.at("seed").get<uint64_t>();
    if (rec.contains("error")) {
      e.failed = true;
      e.error = rec.at("error").get<std::string>();
    }
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

}  // namespace tfsyn
