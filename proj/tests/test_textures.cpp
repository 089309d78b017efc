// Copyright 2026 tfsyn authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <set>

#include "doctest.h"
#include "test_util.hpp"
#include "tfsyn/metrics.hpp"
#include "tfsyn/stft.hpp"
#include "tfsyn/textures.hpp"
#include "tfsyn/wav.hpp"

using namespace tfsyn;

namespace {

// Long-term average spectrum peak, estimated as the energy-squared
// centroid of the half-power region around a smoothed argmax. A lone
// argmax is too jittery on the flat top of a Q = 5 resonance.
double ltas_peak_hz(const std::vector<AudioBuffer>& clips) {
  TfParams p;
  p.fft_size = 4096;
  p.hop = 1024;
  p.window = WindowKind::kHann;
  std::vector<double> energy(p.bins(), 0.0);
  for (const AudioBuffer& clip : clips) {
    ComplexSpectrogram s = stft(clip, p);
    for (int m = 0; m < s.bins(); ++m)
      for (int n = 0; n < s.frames(); ++n)
        energy[m] += std::norm(s.coefficients(m, n));
  }
  std::vector<double> smooth(energy.size(), 0.0);
  for (size_t m = 4; m + 4 < energy.size(); ++m)
    for (int d = -4; d <= 4; ++d) smooth[m] += energy[m + d];
  size_t best = 1;
  for (size_t m = 1; m + 1 < smooth.size(); ++m)
    if (smooth[m] > smooth[best]) best = m;
  double num = 0.0, den = 0.0;
  for (size_t m = 1; m + 1 < smooth.size(); ++m)
    if (smooth[m] > 0.5 * smooth[best]) {
      num += m * smooth[m] * smooth[m];
      den += smooth[m] * smooth[m];
    }
  return num / den * 16000.0 / p.fft_size;
}

// Magnitude peak over a fine frequency comb by direct projection.
double fine_peak_hz(const AudioBuffer& x, double lo, double hi, double step) {
  double best_f = lo, best = -1.0;
  for (double f = lo; f <= hi; f += step) {
    double re = 0.0, im = 0.0;
    for (int t = 0; t < x.length(); ++t) {
      re += x.samples[t] * std::cos(2.0 * kPi * f * t / x.sample_rate);
      im += x.samples[t] * std::sin(2.0 * kPi * f * t / x.sample_rate);
    }
    if (re * re + im * im > best) {
      best = re * re + im * im;
      best_f = f;
    }
  }
  return best_f;
}

}  // namespace

TEST_CASE("pops with zero jitter land on the regular onset grid") {
  AudioBuffer x = gen_pop({4.0, 0.0, 69.0, 1.0, 7}, 16000);
  const auto onsets = detect_onsets(x);
  REQUIRE(onsets.size() == 4);
  const int expected[] = {0, 4000, 8000, 12000};
  for (int k = 0; k < 4; ++k)
    CHECK(std::abs(onsets[k] - expected[k]) <= 16);  // 1 ms
}

TEST_CASE("onset oracle recovers the event count across rates") {
  for (double rate : {2.0, 4.0, 8.0, 16.0}) {
    AudioBuffer x = gen_pop({rate, 0.0, 75.0, 1.0, 11}, 16000);
    CHECK(static_cast<int>(detect_onsets(x).size()) == static_cast<int>(rate));
  }
  // With jitter, collisions are possible at high rates; the count stays
  // exact at low rates where events cannot overlap.
  for (double rate : {2.0, 4.0}) {
    AudioBuffer x = gen_pop({rate, 0.04, 75.0, 1.0, 11}, 16000);
    CHECK(static_cast<int>(detect_onsets(x).size()) == static_cast<int>(rate));
  }
}

TEST_CASE("pop band center follows the MIDI pitch within 3 percent") {
  for (double midi : {69.0, 75.0, 81.0}) {
    std::vector<AudioBuffer> clips;
    for (uint64_t seed = 0; seed < 10; ++seed)
      clips.push_back(gen_pop({16.0, 0.04, midi, 2.0, seed}, 16000));
    const double peak = ltas_peak_hz(clips);
    const double want = midi_to_hz(midi);
    CHECK(std::abs(peak - want) / want < 0.03);
  }
}

TEST_CASE("generators are deterministic in spec plus seed") {
  AudioBuffer a = gen_pop({5.0, 0.2, 70.0, 1.0, 42}, 16000);
  AudioBuffer b = gen_pop({5.0, 0.2, 70.0, 1.0, 42}, 16000);
  CHECK(a.samples == b.samples);
  AudioBuffer c = gen_pop({5.0, 0.2, 70.0, 1.0, 43}, 16000);
  CHECK(a.samples != c.samples);

  ChirpSpec cs;
  cs.seed = 9;
  CHECK(gen_chirp(cs, 16000).samples == gen_chirp(cs, 16000).samples);
  ToneSpec ts;
  ts.seed = 9;
  CHECK(gen_tone(ts, 16000).samples == gen_tone(ts, 16000).samples);
}

TEST_CASE("chirp ridge sweeps one octave up over the event") {
  ChirpSpec cs;
  cs.rate = 2.0;
  cs.irregularity = 0.0;
  cs.sweep_octaves = 1;
  cs.event_duration = 0.2;
  cs.midi_pitch = 69.0;
  cs.seed = 1;
  AudioBuffer x = gen_chirp(cs, 16000);
  TfParams p;
  p.fft_size = 512;
  p.hop = 64;
  p.window = WindowKind::kTruncatedGaussian;
  ComplexSpectrogram s = stft(x, p);
  // Second event starts at t = 0.5 s (frame 125). Track the lower
  // component: restrict the peak search to below 1.5x its expectation.
  double prev = 0.0;
  for (int n = 127; n < 174; n += 2) {
    const double tau = n * 64.0 / 16000.0 - 0.5;
    const double expect = 440.0 * std::pow(2.0, tau / cs.event_duration);
    const int cap = static_cast<int>(1.5 * expect * p.fft_size / 16000.0);
    int best = 0;
    for (int m = 1; m <= cap; ++m)
      if (std::abs(s.coefficients(m, n)) > std::abs(s.coefficients(best, n)))
        best = m;
    const double ridge = best * 16000.0 / p.fft_size;
    CHECK(std::abs(ridge - expect) < 50.0);
    CHECK(ridge >= prev - 32.0);  // rising, one bin of slack
    prev = ridge;
  }
}

TEST_CASE("negative sweep gives the mirrored falling ridge") {
  ChirpSpec cs;
  cs.rate = 2.0;
  cs.irregularity = 0.0;
  cs.sweep_octaves = -1;
  cs.event_duration = 0.2;
  cs.midi_pitch = 69.0;
  cs.seed = 1;
  AudioBuffer x = gen_chirp(cs, 16000);
  TfParams p;
  p.fft_size = 512;
  p.hop = 64;
  p.window = WindowKind::kTruncatedGaussian;
  ComplexSpectrogram s = stft(x, p);
  double prev = 1e9;
  for (int n = 127; n < 174; n += 2) {
    const double tau = n * 64.0 / 16000.0 - 0.5;
    const double expect = 440.0 * std::pow(2.0, -tau / cs.event_duration);
    const int cap = static_cast<int>(1.5 * expect * p.fft_size / 16000.0);
    int best = 0;
    for (int m = 1; m <= cap; ++m)
      if (std::abs(s.coefficients(m, n)) > std::abs(s.coefficients(best, n)))
        best = m;
    const double ridge = best * 16000.0 / p.fft_size;
    CHECK(std::abs(ridge - expect) < 50.0);
    CHECK(ridge <= prev + 32.0);
    prev = ridge;
  }
}

TEST_CASE("chirps at rate 2 produce exactly 2 events") {
  ChirpSpec cs;
  cs.rate = 2.0;
  cs.irregularity = 0.0;
  cs.seed = 5;
  AudioBuffer x = gen_chirp(cs, 16000);
  CHECK(detect_onsets(x).size() == 2);
}

TEST_CASE("tone fundamental matches the MIDI formula within 0.5 percent") {
  AudioBuffer x = gen_tone({57, 8, 2.0, 1.0, 5}, 16000);
  const double peak = fine_peak_hz(x, 200.0, 240.0, 0.1);
  CHECK(std::abs(peak - 220.0) / 220.0 < 0.005);
}

TEST_CASE("single undamped harmonic is a stationary sinusoid") {
  AudioBuffer x = gen_tone({57, 1, 0.0, 1.0, 2}, 16000);
  TfParams p;
  p.fft_size = 512;
  p.hop = 128;
  p.window = WindowKind::kTruncatedGaussian;
  ComplexSpectrogram s = stft(x, p);
  const int k0 = static_cast<int>(std::round(220.0 * p.fft_size / 16000.0));
  // Constant per-hop phase advance at the peak bin away from the edges.
  std::vector<double> adv;
  for (int n = 6; n < s.frames() - 6; ++n)
    adv.push_back(wrap_phase(std::arg(s.coefficients(k0, n)) -
                             std::arg(s.coefficients(k0, n - 1))));
  for (double a : adv) CHECK(std::abs(wrap_phase(a - adv.front())) < 0.02);
}

TEST_CASE("decay rate controls the tail to head RMS ratio") {
  AudioBuffer x = gen_tone({57, 8, 3.0, 1.0, 5}, 16000);
  auto rms = [&](int a, int b) {
    double e = 0.0;
    for (int t = a; t < b; ++t) e += x.samples[t] * x.samples[t];
    return std::sqrt(e / (b - a));
  };
  const double ratio = rms(x.length() - 1600, x.length()) / rms(0, 1600);
  const double expect = std::exp(-3.0 * 0.9);
  CHECK(std::abs(ratio - expect) / expect < 0.2);
}

TEST_CASE("generated audio never clips") {
  std::vector<AudioBuffer> clips;
  clips.push_back(gen_pop({16.0, 0.4, 81.0, 1.0, 1}, 16000));
  ChirpSpec cs;
  cs.rate = 16.0;
  cs.irregularity = 0.4;
  cs.sweep_octaves = 3;
  cs.seed = 1;
  clips.push_back(gen_chirp(cs, 16000));
  clips.push_back(gen_tone({70, 4, 0.5, 1.0, 1}, 16000));
  for (const AudioBuffer& clip : clips) {
    CHECK(clip.length() == 16000);
    for (double s : clip.samples) CHECK(std::abs(s) <= 0.95);
  }
}

TEST_CASE("generators reject out-of-range parameters") {
  CHECK_THROWS_AS(gen_pop({20.0, 0.04, 69.0, 1.0, 0}, 16000),
                  std::invalid_argument);
  CHECK_THROWS_AS(gen_pop({4.0, 0.5, 69.0, 1.0, 0}, 16000),
                  std::invalid_argument);
  CHECK_THROWS_AS(gen_pop({4.0, 0.04, 60.0, 1.0, 0}, 16000),
                  std::invalid_argument);
  ChirpSpec cs;
  cs.sweep_octaves = 2;
  CHECK_THROWS_AS(gen_chirp(cs, 16000), std::invalid_argument);
  cs.sweep_octaves = 1;
  cs.event_duration = 0.5;
  CHECK_THROWS_AS(gen_chirp(cs, 16000), std::invalid_argument);
  CHECK_THROWS_AS(gen_tone({70, 40, 2.0, 1.0, 0}, 16000),  // beyond Nyquist
                  std::invalid_argument);
  CHECK_THROWS_AS(gen_tone({30, 8, 2.0, 1.0, 0}, 16000), std::invalid_argument);
}

TEST_CASE("full grids enumerate the advertised corpus sizes") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "tfsyn_grid_test";
  CorpusOptions opt;
  opt.manifest_only = true;

  CorpusManifest pops = gen_corpus(Family::kPops, opt, (dir / "pops").string());
  CHECK(pops.entries.size() == 46305);  // 21*21*21*5
  CorpusManifest chirps =
      gen_corpus(Family::kChirps, opt, (dir / "chirps").string());
  CHECK(chirps.entries.size() == 40500);  // 5*9*4*5*9*5

  std::set<std::string> paths;
  for (const auto& e : chirps.entries) paths.insert(e.path);
  CHECK(paths.size() == chirps.entries.size());

  CorpusManifest reread =
      read_manifest((dir / "chirps" / "manifest.jsonl").string());
  REQUIRE(reread.entries.size() == chirps.entries.size());
  CHECK(reread.entries[17].seed == chirps.entries[17].seed);
  CHECK(reread.entries[17].params == chirps.entries[17].params);
  fs::remove_all(dir);
}

TEST_CASE("subsampled pop grid keeps 2 values per axis") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "tfsyn_grid_sub";
  CorpusOptions opt;
  opt.grid_subsample = 2;
  CorpusManifest m = gen_corpus(Family::kPops, opt, dir.string());
  CHECK(m.entries.size() == 40);  // 2*2*2*5
  int failed = 0;
  for (const auto& e : m.entries) {
    if (e.failed) ++failed;
    CHECK(fs::exists(dir / e.path));
  }
  CHECK(failed == 0);
  // Rendered audio is reproducible from the manifest parameters.
  const CorpusEntry& e = m.entries[3];
  AudioBuffer again = gen_pop({e.params.at("rate"), e.params.at("irregularity"),
                               e.params.at("midi_pitch"), 1.0, e.seed},
                              16000);
  AudioBuffer from_disk = read_wav((dir / e.path).string());
  REQUIRE(from_disk.length() == again.length());
  CHECK(test::snr_simple_db(again, from_disk) > 80.0);
  fs::remove_all(dir);
}

TEST_CASE("derive_seed decorrelates adjacent indices") {
  std::set<uint64_t> seen;
  for (uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(123, i));
  CHECK(seen.size() == 1000);
  CHECK(derive_seed(123, 0) == derive_seed(123, 0));
  CHECK(derive_seed(123, 0) != derive_seed(124, 0));
}
