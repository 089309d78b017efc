// Copyright 2026 tfsyn authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "test_util.hpp"
#include "tfsyn/griffin_lim.hpp"
#include "tfsyn/metrics.hpp"
#include "tfsyn/stft.hpp"

using namespace tfsyn;

namespace {

TfParams hann_params(int hop = 128) {
  TfParams p;
  p.fft_size = 512;
  p.hop = hop;
  p.window = WindowKind::kHann;
  return p;
}

RealMatrix phase_of(const ComplexSpectrogram& spec) {
  RealMatrix out(spec.bins(), spec.frames());
  for (size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = std::arg(spec.coefficients.data[i]);
  return out;
}

}  // namespace

TEST_CASE("consistent magnitude with its true phase is a fixed point") {
  const TfParams p = hann_params();
  AudioBuffer x = test::noise(13, 0.5);
  ComplexSpectrogram spec = stft(x, p);
  GlConfig cfg;
  cfg.iterations = 5;
  cfg.init_phase = phase_of(spec);
  GlResult r = griffin_lim(log_magnitude(spec), cfg);
  REQUIRE(r.audio.length() == x.length());
  double num = 0.0, den = 0.0;
  for (int t = 0; t < x.length(); ++t) {
    const double d = r.audio.samples[t] - x.samples[t];
    num += d * d;
    den += x.samples[t] * x.samples[t];
  }
  CHECK(std::sqrt(num / den) < 1e-6);
}

TEST_CASE("iterations 0 is exactly the direct inversion of the init phase") {
  const TfParams p = hann_params();
  AudioBuffer x = test::noise(29, 0.25);
  ComplexSpectrogram spec = stft(x, p);
  LogMagSpectrogram lm = log_magnitude(spec);

  GlConfig cfg;
  cfg.iterations = 0;
  cfg.init_phase = phase_of(spec);
  GlResult r = griffin_lim(lm, cfg);
  CHECK(r.inconsistency.empty());

  ComplexSpectrogram rebuilt;
  rebuilt.params = lm.params;
  rebuilt.signal_length = lm.signal_length;
  rebuilt.coefficients = ComplexMatrix(lm.values.bins, lm.values.frames);
  for (size_t i = 0; i < lm.values.data.size(); ++i)
    rebuilt.coefficients.data[i] =
        std::polar(std::exp(lm.values.data[i]), cfg.init_phase->data[i]);
  AudioBuffer direct = istft(rebuilt);
  REQUIRE(r.audio.length() == direct.length());
  for (int t = 0; t < direct.length(); ++t)
    CHECK(r.audio.samples[t] == direct.samples[t]);
}

TEST_CASE("sinusoid magnitude, zero init, 60 iterations converges") {
  TfParams p = hann_params();
  p.window = WindowKind::kTruncatedGaussian;
  const double f = 32.0 * 16000.0 / p.fft_size;  // 1 kHz, bin-centered
  AudioBuffer x = test::sine(f, 2.0);
  GlConfig cfg;
  cfg.iterations = 60;
  GlResult r = griffin_lim(log_magnitude(stft(x, p)), cfg);
  REQUIRE(static_cast<int>(r.inconsistency.size()) == 60);
  for (size_t k = 1; k < r.inconsistency.size(); ++k)
    CHECK(r.inconsistency[k] <= r.inconsistency[k - 1] + 1e-9);
  CHECK(r.inconsistency.back() < 0.1);
  for (double s : r.audio.samples) CHECK(std::isfinite(s));
}

TEST_CASE("trace is non-increasing on a broadband clip too") {
  const TfParams p = hann_params(64);
  AudioBuffer x = test::noise(301, 0.2);
  GlConfig cfg;
  cfg.iterations = 30;
  GlResult r = griffin_lim(log_magnitude(stft(x, p)), cfg);
  REQUIRE(static_cast<int>(r.inconsistency.size()) == 30);
  for (size_t k = 1; k < r.inconsistency.size(); ++k)
    CHECK(r.inconsistency[k] <= r.inconsistency[k - 1] + 1e-9);
}

TEST_CASE("griffin_lim rejects bad configs") {
  const TfParams p = hann_params();
  AudioBuffer x = test::noise(5, 0.1);
  LogMagSpectrogram lm = log_magnitude(stft(x, p));

  GlConfig bad_iters;
  bad_iters.iterations = -1;
  CHECK_THROWS_AS(griffin_lim(lm, bad_iters), std::invalid_argument);

  GlConfig bad_shape;
  bad_shape.iterations = 1;
  bad_shape.init_phase = RealMatrix(lm.values.bins, lm.values.frames + 1);
  CHECK_THROWS_AS(griffin_lim(lm, bad_shape), std::invalid_argument);
}
