// Copyright 2026 tfsyn authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "tfsyn/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "json.hpp"
#include "tfsyn/embedding.hpp"
#include "tfsyn/griffin_lim.hpp"
#include "tfsyn/metrics.hpp"
#include "tfsyn/pghi.hpp"
#include "tfsyn/representations.hpp"
#include "tfsyn/stft.hpp"

namespace tfsyn {

namespace {

using nlohmann::json;

double channel_std(const std::vector<double>& v,
                   double exclude_at_or_below) {
  double sum = 0.0, sq = 0.0;
  size_t n = 0;
  for (double x : v) {
    if (x <= exclude_at_or_below) continue;
    sum += x;
    sq += x * x;
    ++n;
  }
  if (n < 2) return 0.0;
  const double mean = sum / n;
  return std::sqrt(std::max(0.0, sq / n - mean * mean));
}

double vec_std(const std::vector<double>& v) {
  double sum = 0.0, sq = 0.0;
  for (double x : v) {
    sum += x;
    sq += x * x;
  }
  const double mean = sum / v.size();
  return std::sqrt(std::max(0.0, sq / v.size() - mean * mean));
}

// Equal relative perturbation across channels: sigma is specified in IF
// units, so the magnitude channel gets sigma * std(logmag) / std(IF).
double mag_sigma_scale_for(const ComplexSpectrogram& spec) {
  IfSpectrogram rep = compute_if(spec);
  const double std_mag = channel_std(rep.log_mag.data, rep.floor);
  const double std_if = vec_std(rep.if_channel.data);
  if (std_if <= 0.0 || std_mag <= 0.0) return 1.0;
  return std_mag / std_if;
}

}  // namespace

std::string pipeline_name(Pipeline p) {
  switch (p) {
    case Pipeline::kIf: return "if";
    case Pipeline::kPghi: return "pghi";
    case Pipeline::kGriffinLim: return "gl";
  }
  throw std::invalid_argument("unknown pipeline");
}

Pipeline pipeline_from_name(const std::string& name) {
  if (name == "if") return Pipeline::kIf;
  if (name == "pghi") return Pipeline::kPghi;
  if (name == "gl" || name == "griffinlim") return Pipeline::kGriffinLim;
  throw std::invalid_argument("unknown pipeline: " + name);
}

TfParams preset_params(int hop, WindowKind window) {
  if (hop != 64 && hop != 128)
    throw std::invalid_argument("presets allow hop 64 or 128 only");
  TfParams params;
  params.fft_size = 512;
  params.hop = hop;
  params.window = window;
  return params;
}

void ExperimentConfig::validate() const {
  if (families.empty() || pipelines.empty() || hops.empty() ||
      noise_sigmas.empty())
    throw std::invalid_argument("empty experiment axis");
  for (int hop : hops) preset_params(hop, WindowKind::kHann);
  for (double s : noise_sigmas)
    if (s < 0.0) throw std::invalid_argument("negative noise sigma");
  if (clips_per_cell < 2)
    throw std::invalid_argument("clips_per_cell must be >= 2");
  if (griffin_lim_iterations < 0)
    throw std::invalid_argument("griffin_lim_iterations must be >= 0");
  if (!(pghi_tol > 0.0 && pghi_tol < 1.0))
    throw std::invalid_argument("pghi_tol must be in (0,1)");
}

AudioBuffer make_harness_clip(Family family, uint64_t seed, int sample_rate) {
  std::mt19937_64 rng(seed);
  auto pick = [&rng](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  switch (family) {
    case Family::kPops: {
      PopSpec spec;
      spec.rate = pick(2.0, 16.0);
      spec.irregularity = pick(0.04, 0.4);
      spec.midi_pitch = pick(69.0, 81.0);
      spec.seed = derive_seed(seed, 1);
      return gen_pop(spec, sample_rate);
    }
    case Family::kChirps: {
      ChirpSpec spec;
      spec.rate = pick(2.0, 16.0);
      spec.irregularity = pick(0.04, 0.4);
      const int octs[4] = {-3, -1, 1, 3};
      spec.sweep_octaves = octs[rng() % 4];
      spec.event_duration = pick(0.02, 0.2);
      spec.midi_pitch = pick(69.0, 81.0);
      spec.seed = derive_seed(seed, 1);
      return gen_chirp(spec, sample_rate);
    }
    case Family::kTones: {
      ToneSpec spec;
      spec.midi_pitch = 44 + static_cast<int>(rng() % 27);
      spec.num_harmonics = 1 + static_cast<int>(rng() % 12);
      spec.decay_rate = pick(0.5, 6.0);
      spec.seed = derive_seed(seed, 1);
      return gen_tone(spec, sample_rate);
    }
  }
  throw std::invalid_argument("unknown family");
}

AudioBuffer run_pipeline(const AudioBuffer& clip, Pipeline pipeline, int hop,
                         double sigma, uint64_t seed,
                         const ExperimentConfig& config) {
  const uint64_t noise_seed = derive_seed(seed, 7);
  switch (pipeline) {
    case Pipeline::kIf: {
      ComplexSpectrogram spec =
          stft(clip, preset_params(hop, WindowKind::kHann));
      IfSpectrogram rep = compute_if(spec);
      if (sigma > 0.0)
        rep = inject_noise(rep, sigma, NoiseChannel::kIf, noise_seed);
      return invert_if(rep);
    }
    case Pipeline::kPghi: {
      ComplexSpectrogram spec =
          stft(clip, preset_params(hop, WindowKind::kTruncatedGaussian));
      LogMagSpectrogram lm = log_magnitude(spec);
      if (sigma > 0.0) {
        const double scale = mag_sigma_scale_for(spec);
        lm = inject_noise(lm, sigma * scale, NoiseChannel::kMagnitude,
                          noise_seed);
      }
      return pghi_invert(lm, config.pghi_tol, derive_seed(seed, 11));
    }
    case Pipeline::kGriffinLim: {
      ComplexSpectrogram spec =
          stft(clip, preset_params(hop, WindowKind::kHann));
      LogMagSpectrogram lm = log_magnitude(spec);
      if (sigma > 0.0) {
        const double scale = mag_sigma_scale_for(spec);
        lm = inject_noise(lm, sigma * scale, NoiseChannel::kMagnitude,
                          noise_seed);
      }
      GlConfig cfg;
      cfg.iterations = config.griffin_lim_iterations;
      return griffin_lim(lm, cfg).audio;
    }
  }
  throw std::invalid_argument("unknown pipeline");
}

ExperimentReport run_robustness(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  report.config = config;

  struct Cell {
    Family family;
    Pipeline pipeline;
    int hop;
    double sigma;
  };
  std::vector<Cell> cells;
  for (Family f : config.families)
    for (Pipeline p : config.pipelines)
      for (int hop : config.hops)
        for (double sigma : config.noise_sigmas)
          cells.push_back({f, p, hop, sigma});
  report.cells.resize(cells.size());

#pragma omp parallel for schedule(dynamic)
  for (size_t ci = 0; ci < cells.size(); ++ci) {
    const Cell& cell = cells[ci];
    CellResult r;
    r.family = cell.family;
    r.pipeline = cell.pipeline;
    r.hop = cell.hop;
    r.sigma = cell.sigma;

    std::vector<double> scs, lsds, snrs, scales;
    std::vector<AudioBuffer> originals, outputs;
    const TfParams score_params = preset_params(cell.hop, WindowKind::kHann);
    for (int i = 0; i < config.clips_per_cell; ++i) {
      // Clip seeds depend on (family, clip) only, so every pipeline and
      // sigma sees the same population.
      const uint64_t clip_seed = derive_seed(
          config.master_seed, static_cast<uint64_t>(cell.family) * 1000003 + i);
      const uint64_t run_seed = derive_seed(clip_seed, ci + 13);
      try {
        AudioBuffer clip = make_harness_clip(cell.family, clip_seed);
        if (cell.pipeline == Pipeline::kPghi && cell.sigma > 0.0) {
          ComplexSpectrogram spec = stft(
              clip, preset_params(cell.hop, WindowKind::kTruncatedGaussian));
          scales.push_back(mag_sigma_scale_for(spec));
        }
        AudioBuffer out = run_pipeline(clip, cell.pipeline, cell.hop,
                                       cell.sigma, run_seed, config);
        scs.push_back(spectral_convergence(clip, out, score_params));
        lsds.push_back(log_spectral_distance(clip, out, score_params));
        snrs.push_back(snr_db(clip, out, /*align=*/true));
        originals.push_back(std::move(clip));
        outputs.push_back(std::move(out));
      } catch (const std::exception&) {
        ++r.failures;
      }
    }

    r.clips = static_cast<int>(scs.size());
    auto mean_of = [](const std::vector<double>& v) {
      double s = 0.0;
      for (double x : v) s += x;
      return v.empty() ? 0.0 : s / v.size();
    };
    r.sc_mean = mean_of(scs);
    r.lsd_mean = mean_of(lsds);
    r.snr_mean = mean_of(snrs);
    if (!scs.empty()) {
      r.sc_std = vec_std(scs);
      r.lsd_std = vec_std(lsds);
      r.snr_std = vec_std(snrs);
    }
    r.mag_sigma_scale = scales.empty() ? 0.0 : mean_of(scales);
    if (originals.size() >= 2)
      r.frechet = frechet_distance(embed_logmel_stats(originals),
                                   embed_logmel_stats(outputs));
    report.cells[ci] = r;
  }

  if (!config.output.empty()) write_report(config.output, report);
  return report;
}

namespace {

json config_to_json(const ExperimentConfig& c) {
  json j;
  for (Family f : c.families) j["families"].push_back(family_name(f));
  for (Pipeline p : c.pipelines) j["pipelines"].push_back(pipeline_name(p));
  j["hops"] = c.hops;
  j["noise_sigmas"] = c.noise_sigmas;
  j["clips_per_cell"] = c.clips_per_cell;
  j["griffin_lim_iterations"] = c.griffin_lim_iterations;
  j["pghi_tol"] = c.pghi_tol;
  j["master_seed"] = c.master_seed;
  return j;
}

}  // namespace

void write_report(const std::string& dir, const ExperimentReport& report) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  json j;
  j["provenance"] = config_to_json(report.config);
  j["provenance"]["artifact_version"] = 1;
  for (const auto& c : report.cells) {
    // Fixed-precision serialization keeps reports byte-identical.
    auto fix = [](double v) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.6f", v);
      return std::stod(buf);
    };
    j["cells"].push_back({{"family", family_name(c.family)},
                          {"pipeline", pipeline_name(c.pipeline)},
                          {"hop", c.hop},
                          {"sigma", c.sigma},
                          {"clips", c.clips},
                          {"failures", c.failures},
                          {"spectral_convergence", {{"mean", fix(c.sc_mean)}, {"std", fix(c.sc_std)}}},
                          {"lsd_db", {{"mean", fix(c.lsd_mean)}, {"std", fix(c.lsd_std)}}},
                          {"snr_db", {{"mean", fix(c.snr_mean)}, {"std", fix(c.snr_std)}}},
                          {"frechet", fix(c.frechet)},
                          {"mag_sigma_scale", fix(c.mag_sigma_scale)}});
  }
  std::ofstream jf((fs::path(dir) / "report.json").string());
  jf << j.dump(2) << "\n";

  std::ofstream tf((fs::path(dir) / "report.txt").string());
  tf << "robustness report\n";
  tf << "master_seed = " << report.config.master_seed << "\n";
  tf << "clips_per_cell = " << report.config.clips_per_cell << "\n";
  tf << "griffin_lim_iterations = " << report.config.griffin_lim_iterations
     << "\n\n";
  char line[256];
  std::snprintf(line, sizeof(line), "%-8s %-5s %4s %6s %10s %10s %10s %10s\n",
                "family", "pipe", "hop", "sigma", "sc", "lsd_db", "snr_db",
                "frechet");
  tf << line;
  for (const auto& c : report.cells) {
    std::snprintf(line, sizeof(line),
                  "%-8s %-5s %4d %6.2f %10.4f %10.4f %10.4f %10.4f\n",
                  family_name(c.family).c_str(),
                  pipeline_name(c.pipeline).c_str(), c.hop, c.sigma, c.sc_mean,
                  c.lsd_mean, c.snr_mean, c.frechet);
    tf << line;
  }
  if (!tf) throw std::runtime_error("failed writing report to " + dir);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    f >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  ExperimentConfig c;
  if (j.contains("families")) {
    c.families.clear();
    for (const auto& v : j["families"])
      c.families.push_back(family_from_name(v.get<std::string>()));
  }
  if (j.contains("pipelines")) {
    c.pipelines.clear();
    for (const auto& v : j["pipelines"])
      c.pipelines.push_back(pipeline_from_name(v.get<std::string>()));
  }
  if (j.contains("hops")) c.hops = j["hops"].get<std::vector<int>>();
  if (j.contains("noise_sigmas"))
    c.noise_sigmas = j["noise_sigmas"].get<std::vector<double>>();
  if (j.contains("clips_per_cell"))
    c.clips_per_cell = j["clips_per_cell"].get<int>();
  if (j.contains("griffin_lim_iterations"))
    c.griffin_lim_iterations = j["griffin_lim_iterations"].get<int>();
  if (j.contains("pghi_tol")) c.pghi_tol = j["pghi_tol"].get<double>();
  if (j.contains("master_seed"))
    c.master_seed = j["master_seed"].get<uint64_t>();
  if (j.contains("output")) c.output = j["output"].get<std::string>();
  c.validate();
  return c;
}

}  // namespace tfsyn
