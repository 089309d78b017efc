// Copyright 2026 tfsyn authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Command-line front end: analyze, invert, gen, metric, bench.
// Exit codes: 0 success, 1 usage error, 2 data/runtime error.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tfsyn/embedding.hpp"
#include "tfsyn/griffin_lim.hpp"
#include "tfsyn/harness.hpp"
#include "tfsyn/metrics.hpp"
#include "tfsyn/pghi.hpp"
#include "tfsyn/representations.hpp"
#include "tfsyn/stft.hpp"
#include "tfsyn/textures.hpp"
#include "tfsyn/tfs1.hpp"
#include "tfsyn/wav.hpp"

namespace {

using namespace tfsyn;

struct GlobalFlags {
  uint64_t seed = 1;
  int hop = 128;
  std::string window = "gauss";

  TfParams params() const {
    TfParams p;
    p.fft_size = 512;
    p.hop = hop;
    p.window =
        window == "hann" ? WindowKind::kHann : WindowKind::kTruncatedGaussian;
    return p;
  }
};

int run_analyze(const GlobalFlags& g, const std::string& input,
                const std::string& output, const std::string& rep) {
  const AudioBuffer audio = read_wav(input);
  const ComplexSpectrogram spec = stft(audio, g.params());
  if (rep == "complex") {
    write_tfs1(output, spec);
  } else if (rep == "logmag") {
    write_tfs1(output, log_magnitude(spec));
  } else {
    write_tfs1(output, compute_if(spec));
  }
  std::printf("%s -> %s (%s, %d bins x %d frames)\n", input.c_str(),
              output.c_str(), rep.c_str(), spec.bins(), spec.frames());
  return 0;
}

int run_invert(const GlobalFlags& g, const std::string& input,
               const std::string& output, const std::string& pipeline,
               double tol, int iterations, int length) {
  const Tfs1File file = read_tfs1(input);
  const TfParams params = g.params();
  const int signal_length = length > 0 ? length : file.frames * params.hop;

  AudioBuffer audio;
  if (file.flags & kTfs1Complex) {
    ComplexSpectrogram spec;
    spec.params = params;
    spec.signal_length = signal_length;
    spec.coefficients = file.complex_data;
    audio = istft(spec);
  } else if (file.flags & kTfs1HasIf) {
    IfSpectrogram rep;
    rep.params = params;
    rep.signal_length = signal_length;
    rep.log_mag = file.log_mag;
    rep.if_channel = file.if_channel;
    rep.floor = *std::min_element(rep.log_mag.data.begin(),
                                  rep.log_mag.data.end());
    audio = invert_if(rep, pipeline == "gl" ? iterations : 0);
  } else {
    LogMagSpectrogram lm;
    lm.params = params;
    lm.signal_length = signal_length;
    lm.values = file.log_mag;
    lm.floor =
        *std::min_element(lm.values.data.begin(), lm.values.data.end());
    if (pipeline == "gl") {
      GlConfig cfg;
      cfg.iterations = iterations;
      audio = griffin_lim(lm, cfg).audio;
    } else {
      audio = pghi_invert(lm, tol, g.seed);
    }
  }
  write_wav(output, audio);
  std::printf("%s -> %s (%d samples)\n", input.c_str(), output.c_str(),
              audio.length());
  return 0;
}

AudioBuffer gen_one(const GlobalFlags& g, Family family, uint64_t seed,
                    double rate, double irregularity, double midi,
                    int sweep_octaves, double event_duration, int harmonics,
                    double decay, double duration) {
  switch (family) {
    case Family::kPops:
      return gen_pop({rate, irregularity, midi, duration, seed});
    case Family::kChirps: {
      ChirpSpec spec;
      spec.rate = rate;
      spec.irregularity = irregularity;
      spec.sweep_octaves = sweep_octaves;
      spec.event_duration = event_duration;
      spec.midi_pitch = midi;
      spec.duration = duration;
      spec.seed = seed;
      return gen_chirp(spec);
    }
    case Family::kTones:
      return gen_tone({static_cast<int>(midi), harmonics, decay, duration,
                       seed});
  }
  throw std::invalid_argument("unknown family");
  (void)g;
}

int run_gen(const GlobalFlags& g, const std::string& family_str,
            const std::string& output, bool corpus, int subsample,
            bool manifest_only, int count, bool stitch, double rate,
            double irregularity, double midi, int sweep_octaves,
            double event_duration, int harmonics, double decay,
            double duration) {
  const Family family = family_from_name(family_str);

  if (corpus) {
    const std::string& corpus_dir = output;
    CorpusOptions opt;
    opt.grid_subsample = subsample;
    opt.master_seed = g.seed;
    opt.manifest_only = manifest_only;
    const CorpusManifest manifest = gen_corpus(family, opt, corpus_dir);
    int failed = 0;
    for (const auto& e : manifest.entries) failed += e.failed ? 1 : 0;
    std::printf("%s corpus: %zu entries (%d failed) in %s\n",
                family_str.c_str(), manifest.entries.size(), failed,
                corpus_dir.c_str());
    return 0;
  }

  std::vector<AudioBuffer> clips;
  for (int i = 0; i < count; ++i)
    clips.push_back(gen_one(g, family, derive_seed(g.seed, i), rate,
                            irregularity, midi, sweep_octaves, event_duration,
                            harmonics, decay, duration));
  if (stitch) {
    // Listening-test layout: clips separated by 0.5 s of silence.
    AudioBuffer joined;
    joined.sample_rate = 16000;
    const int gap = 8000;
    for (size_t i = 0; i < clips.size(); ++i) {
      if (i > 0) joined.samples.insert(joined.samples.end(), gap, 0.0);
      joined.samples.insert(joined.samples.end(), clips[i].samples.begin(),
                            clips[i].samples.end());
    }
    write_wav(output, joined);
    std::printf("wrote %zu stitched clips to %s\n", clips.size(),
                output.c_str());
  } else if (count == 1) {
    write_wav(output, clips[0]);
    std::printf("wrote %s\n", output.c_str());
  } else {
    namespace fs = std::filesystem;
    fs::create_directories(output);
    for (int i = 0; i < count; ++i) {
      char name[64];
      std::snprintf(name, sizeof(name), "%s_%04d.wav", family_str.c_str(), i);
      write_wav((fs::path(output) / name).string(), clips[i]);
    }
    std::printf("wrote %d clips to %s\n", count, output.c_str());
  }
  return 0;
}

std::vector<AudioBuffer> read_wav_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".wav") paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  std::vector<AudioBuffer> clips;
  for (const auto& p : paths) clips.push_back(read_wav(p));
  if (clips.size() < 2)
    throw std::runtime_error(dir + ": need at least 2 wav files");
  return clips;
}

int run_metric(const GlobalFlags& g, const std::string& kind,
               const std::string& ref, const std::string& est) {
  double value = 0.0;
  if (kind == "frechet") {
    value = frechet_distance(embed_logmel_stats(read_wav_dir(ref)),
                             embed_logmel_stats(read_wav_dir(est)));
  } else {
    const AudioBuffer a = read_wav(ref), b = read_wav(est);
    if (kind == "sc")
      value = spectral_convergence(a, b, g.params());
    else if (kind == "lsd")
      value = log_spectral_distance(a, b, g.params());
    else
      value = snr_db(a, b, /*align=*/true);
  }
  std::printf("%s = %.6f\n", kind.c_str(), value);
  return 0;
}

int run_bench(const GlobalFlags& g, const std::string& config_path,
              const std::string& output) {
  ExperimentConfig config = load_config(config_path);
  if (!output.empty()) config.output = output;
  if (config.master_seed == 1) config.master_seed = g.seed;
  const ExperimentReport report = run_robustness(config);
  for (const auto& cell : report.cells)
    std::printf("%-8s %-5s hop %3d sigma %.2f  sc %.4f  lsd %8.4f dB  "
                "snr %8.2f dB  frechet %10.4f\n",
                family_name(cell.family).c_str(),
                pipeline_name(cell.pipeline).c_str(), cell.hop, cell.sigma,
                cell.sc_mean, cell.lsd_mean, cell.snr_mean, cell.frechet);
  if (!config.output.empty())
    std::printf("report written to %s\n", config.output.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-frequency representations, inversion, and textures"};
  app.require_subcommand(1);

  GlobalFlags g;
  app.add_option("--seed", g.seed, "master seed for all randomness");
  app.add_option("--hop", g.hop, "analysis hop size")
      ->check(CLI::IsMember({64, 128}));
  app.add_option("--window", g.window, "analysis window")
      ->check(CLI::IsMember({"hann", "gauss"}));

  auto* analyze = app.add_subcommand("analyze", "WAV to TFS1 representation");
  std::string in_path, out_path, rep = "logmag";
  analyze->add_option("input", in_path, "input wav")->required();
  analyze->add_option("output", out_path, "output tfs1")->required();
  analyze->add_option("--rep", rep, "representation to store")
      ->check(CLI::IsMember({"logmag", "if", "complex"}));

  auto* invert = app.add_subcommand("invert", "TFS1 to WAV");
  std::string pipeline = "pghi";
  double tol = kPghiDefaultTol;
  int iterations = 60, length = 0;
  invert->add_option("input", in_path, "input tfs1")->required();
  invert->add_option("output", out_path, "output wav")->required();
  invert->add_option("--pipeline", pipeline,
                     "inversion for magnitude-only input")
      ->check(CLI::IsMember({"pghi", "gl"}));
  invert->add_option("--tol", tol, "PGHI significance tolerance");
  invert->add_option("--iterations", iterations, "Griffin-Lim iterations");
  invert->add_option("--length", length, "output length in samples");

  auto* gen = app.add_subcommand("gen", "texture clips or corpus grids");
  std::string family = "pops";
  int subsample = 0, count = 1, sweep_octaves = 1, harmonics = 8;
  bool corpus = false, manifest_only = false, stitch = false;
  double rate = 4.0, irregularity = 0.04, midi = 69.0, event_duration = 0.1;
  double decay = 2.0, duration = 1.0;
  gen->add_option("output", out_path, "output wav or directory")->required();
  gen->add_option("--family", family, "texture family")
      ->check(CLI::IsMember({"pops", "chirps", "tones"}));
  gen->add_flag("--corpus", corpus, "render the family's full parameter grid");
  gen->add_option("--subsample", subsample, "values kept per grid axis");
  gen->add_flag("--manifest-only", manifest_only,
                "enumerate the grid without rendering audio");
  gen->add_option("--count", count, "number of clips")->check(CLI::Range(1, 10000));
  gen->add_flag("--stitch", stitch, "join clips with 0.5 s silences");
  gen->add_option("--rate", rate, "events per second");
  gen->add_option("--irregularity", irregularity, "onset jitter std, seconds");
  gen->add_option("--midi", midi, "MIDI pitch");
  gen->add_option("--sweep-octaves", sweep_octaves, "chirp sweep range");
  gen->add_option("--event-duration", event_duration, "chirp event length, s");
  gen->add_option("--harmonics", harmonics, "tone harmonic count");
  gen->add_option("--decay", decay, "tone decay rate, 1/s");
  gen->add_option("--duration", duration, "clip length, seconds");

  auto* metric = app.add_subcommand("metric", "pairwise or population scores");
  std::string kind = "snr";
  std::string ref_path, est_path;
  metric->add_option("--kind", kind, "metric to compute")
      ->check(CLI::IsMember({"sc", "lsd", "snr", "frechet"}));
  metric->add_option("reference", ref_path, "reference wav (or dir for frechet)")
      ->required();
  metric->add_option("estimate", est_path, "estimate wav (or dir for frechet)")
      ->required();

  auto* bench = app.add_subcommand("bench", "robustness sweep from a config");
  std::string config_path, bench_output;
  bench->add_option("config", config_path, "experiment config json")
      ->required();
  bench->add_option("--output", bench_output, "report directory override");

  for (CLI::App* sub : {analyze, invert, gen, metric, bench})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(analyze))
      return run_analyze(g, in_path, out_path, rep);
    if (app.got_subcommand(invert))
      return run_invert(g, in_path, out_path, pipeline, tol, iterations,
                        length);
    if (app.got_subcommand(gen))
      return run_gen(g, family, out_path, corpus, subsample, manifest_only,
                     count, stitch, rate, irregularity, midi, sweep_octaves,
                     event_duration, harmonics, decay, duration);
    if (app.got_subcommand(metric)) return run_metric(g, kind, ref_path,
                                                      est_path);
    if (app.got_subcommand(bench)) return run_bench(g, config_path,
                                                    bench_output);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
