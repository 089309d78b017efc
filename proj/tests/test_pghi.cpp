// Copyright 2026 tfsyn authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "test_util.hpp"
#include "tfsyn/metrics.hpp"
#include "tfsyn/pghi.hpp"
#include "tfsyn/representations.hpp"
#include "tfsyn/stft.hpp"
#include "tfsyn/textures.hpp"

using namespace tfsyn;

namespace {

TfParams gauss_params(int hop = 128) {
  TfParams p;
  p.fft_size = 512;
  p.hop = hop;
  p.window = WindowKind::kTruncatedGaussian;
  return p;
}

int peak_bin(const RealMatrix& values, int frame) {
  int arg = 0;
  for (int m = 1; m < values.bins; ++m)
    if (values(m, frame) > values(arg, frame)) arg = m;
  return arg;
}

}  // namespace

TEST_CASE("phase gradients reject Hann analyses and low redundancy") {
  AudioBuffer x = test::noise(1, 0.1);
  TfParams hann = gauss_params();
  hann.window = WindowKind::kHann;
  CHECK_THROWS_WITH_AS(phase_gradients(log_magnitude(stft(x, hann))),
                       doctest::Contains("Gaussian"), std::invalid_argument);
  TfParams thin = gauss_params(256);  // redundancy 2
  CHECK_THROWS_WITH_AS(phase_gradients(log_magnitude(stft(x, thin))),
                       doctest::Contains(">= 4"), std::invalid_argument);
}

TEST_CASE("phi_t of a bin-centered tone matches the true phase advance") {
  const TfParams p = gauss_params();
  const double f = 15.0 * 16000.0 / p.fft_size;  // bin 15
  AudioBuffer x = test::sine(f, 0.5);
  ComplexSpectrogram spec = stft(x, p);
  PhaseGradients g = phase_gradients(log_magnitude(spec));
  const int k0 = 15;
  for (int n = 6; n < g.dphase_dt.frames - 6; ++n) {
    // True per-hop phase difference from the computed STFT.
    const double truth = wrap_phase(std::arg(spec.coefficients(k0, n)) -
                                    std::arg(spec.coefficients(k0, n - 1)));
    CHECK(std::abs(wrap_phase(g.dphase_dt(k0, n) - truth)) < 1e-2);
  }
}

TEST_CASE("phi_omega vanishes at a stationary tone's peak") {
  const TfParams p = gauss_params();
  const double f = 21.0 * 16000.0 / p.fft_size;
  AudioBuffer x = test::sine(f, 0.5);
  PhaseGradients g = phase_gradients(log_magnitude(stft(x, p)));
  for (int n = 6; n < g.dphase_df.frames - 6; ++n)
    CHECK(std::abs(g.dphase_df(21, n)) < 1e-2);
}

TEST_CASE("an isolated impulse reverses the roles of the gradients") {
  const TfParams p = gauss_params();
  AudioBuffer x;
  x.samples.assign(16000, 0.0);
  const int n0 = 60;
  x.samples[n0 * p.hop] = 1.0;
  ComplexSpectrogram spec = stft(x, p);
  PhaseGradients g = phase_gradients(log_magnitude(spec));

  // phi_omega carries the structure: compare against true frequency-axis
  // phase differences of the computed STFT. The frame before the impulse
  // sits next to floored frames (the truncated window drops the impulse
  // two hops back), so only the impulse frame and its successor have
  // clean centered differences.
  for (int off : {0, 1}) {
    const int n = n0 + off;
    for (int m = 40; m < 80; ++m) {
      const double truth = wrap_phase(std::arg(spec.coefficients(m + 1, n)) -
                                      std::arg(spec.coefficients(m, n)));
      CHECK(std::abs(wrap_phase(g.dphase_df(m, n) - truth)) < 2e-2);
    }
  }
  // phi_t is the demodulation ramp (no extra time structure) away from
  // the impulse only where magnitude is meaningful; at the impulse frame
  // itself the log magnitude is flat in time, so the correction is 0.
  for (int m = 40; m < 80; ++m) {
    const double demod = 2.0 * kPi * p.hop * m / p.fft_size;
    CHECK(std::abs(wrap_phase(g.dphase_dt(m, n0) - demod)) < 1e-6);
  }
}

TEST_CASE("heap assigns a lone significant cell phase 0, the rest random") {
  LogMagSpectrogram lm;
  lm.params = gauss_params();
  lm.signal_length = 2048;
  lm.floor = -10.0;
  lm.values = RealMatrix(257, 16, -10.0);
  lm.values(100, 8) = 0.0;
  PhaseGradients g;
  g.params = lm.params;
  g.dphase_dt = RealMatrix(257, 16, 0.5);
  g.dphase_df = RealMatrix(257, 16, 0.5);
  RealMatrix phase = heap_integrate(lm, g, 1e-4, 42);
  CHECK(phase(100, 8) == 0.0);
  int zero_count = 0;
  for (double v : phase.data) {
    if (v == 0.0) ++zero_count;
    CHECK(v > -kPi);
    CHECK(v <= kPi);
  }
  CHECK(zero_count == 1);
}

TEST_CASE("disconnected regions are independently seeded at phase 0") {
  LogMagSpectrogram lm;
  lm.params = gauss_params();
  lm.signal_length = 2048;
  lm.floor = -10.0;
  lm.values = RealMatrix(257, 16, -10.0);
  // Two 2x1 islands far apart.
  lm.values(10, 2) = 0.0;
  lm.values(10, 3) = -0.1;
  lm.values(200, 12) = -0.05;
  lm.values(200, 13) = -0.2;
  PhaseGradients g;
  g.params = lm.params;
  g.dphase_dt = RealMatrix(257, 16, 0.7);
  g.dphase_df = RealMatrix(257, 16, 0.0);
  RealMatrix phase = heap_integrate(lm, g, 1e-3, 1);
  CHECK(phase(10, 2) == 0.0);
  CHECK(phase(200, 12) == 0.0);
  CHECK(phase(10, 3) == doctest::Approx(0.7));
  CHECK(phase(200, 13) == doctest::Approx(0.7));
}

TEST_CASE("integration is path independent on a smooth phase surface") {
  // Sample gradients from phi(m, n) = alpha*n + beta*m + c*m*n and check
  // the heap reproduces the surface up to one constant per region.
  const int bins = 40, frames = 30;
  const double alpha = 0.3, beta = -0.2, c = 0.01;
  auto surface = [&](int m, int n) { return alpha * n + beta * m + c * m * n; };
  LogMagSpectrogram lm;
  lm.params = gauss_params();
  lm.signal_length = 2048;
  lm.floor = -50.0;
  lm.values = RealMatrix(bins, frames);
  for (int m = 0; m < bins; ++m)
    for (int n = 0; n < frames; ++n)
      lm.values(m, n) = -0.001 * ((m - 20) * (m - 20) + (n - 15) * (n - 15));
  PhaseGradients g;
  g.params = lm.params;
  g.dphase_dt = RealMatrix(bins, frames);
  g.dphase_df = RealMatrix(bins, frames);
  for (int m = 0; m < bins; ++m)
    for (int n = 0; n < frames; ++n) {
      g.dphase_dt(m, n) = alpha + c * m;  // d phi / dn
      g.dphase_df(m, n) = beta + c * n;   // d phi / dm
    }
  RealMatrix phase = heap_integrate(lm, g, 1e-6, 3);
  const double offset = phase(20, 15) - surface(20, 15);
  for (int m = 0; m < bins; ++m)
    for (int n = 0; n < frames; ++n)
      CHECK(std::abs(phase(m, n) - surface(m, n) - offset) < 1e-6);
}

TEST_CASE("every significant cell is assigned exactly once") {
  const TfParams p = gauss_params();
  AudioBuffer x = gen_pop({6.0, 0.05, 72.0, 1.0, 9}, 16000);
  LogMagSpectrogram lm = log_magnitude(stft(x, p));
  PhaseGradients g = phase_gradients(lm);
  RealMatrix phase = heap_integrate(lm, g, 1e-7, 5);
  CHECK(phase.same_shape(lm.values.bins, lm.values.frames));
  for (double v : phase.data) CHECK(std::isfinite(v));
}

TEST_CASE("heap integration is deterministic for a fixed seed") {
  const TfParams p = gauss_params();
  AudioBuffer x = gen_chirp({4.0, 0.05, 1, 0.1, 72.0, 1.0, 2}, 16000);
  LogMagSpectrogram lm = log_magnitude(stft(x, p));
  PhaseGradients g = phase_gradients(lm);
  RealMatrix a = heap_integrate(lm, g, 1e-7, 5);
  RealMatrix b = heap_integrate(lm, g, 1e-7, 5);
  CHECK(a.data == b.data);
}

TEST_CASE("reconstructed tone phase tracks the truth within 0.1 rad over 1 s") {
  const TfParams p = gauss_params();
  const double f = 15.0 * 16000.0 / p.fft_size;
  AudioBuffer x = test::sine(f, 1.0);
  ComplexSpectrogram spec = stft(x, p);
  LogMagSpectrogram lm = log_magnitude(spec);
  RealMatrix phase = heap_integrate(lm, phase_gradients(lm), 1e-7, 0);
  const int k0 = 15;
  const int n_ref = 6;
  const double offset =
      wrap_phase(phase(k0, n_ref) - std::arg(spec.coefficients(k0, n_ref)));
  for (int n = n_ref; n < spec.frames() - 6; ++n) {
    const double truth = std::arg(spec.coefficients(k0, n));
    CHECK(std::abs(wrap_phase(phase(k0, n) - offset - truth)) < 0.1);
  }
}

TEST_CASE("pghi_invert beats a zero-phase baseline on a clean tone") {
  const TfParams p = gauss_params();
  const double f = 15.0 * 16000.0 / p.fft_size;
  // Long enough that the few boundary frames (where the fold-in of the
  // reflection padding interferes with the arbitrary global phase) stop
  // dominating the Frobenius average.
  AudioBuffer x = test::sine(f, 4.0);
  ComplexSpectrogram spec = stft(x, p);
  LogMagSpectrogram lm = log_magnitude(spec);

  AudioBuffer y = pghi_invert(lm);
  CHECK(spectral_convergence(x, y, p) <= 0.05);

  // Zero-phase baseline.
  ComplexSpectrogram zp = spec;
  for (size_t i = 0; i < zp.coefficients.data.size(); ++i)
    zp.coefficients.data[i] = std::abs(zp.coefficients.data[i]);
  AudioBuffer z = istft(zp);
  CHECK(snr_db(x, y, true) >= snr_db(x, z, true) + 20.0);
}

TEST_CASE("pghi_invert maps silence to silence") {
  AudioBuffer zeros;
  zeros.samples.assign(8000, 0.0);
  LogMagSpectrogram lm = log_magnitude(stft(zeros, gauss_params()));
  AudioBuffer y = pghi_invert(lm);
  // The log floor sits 100 dB under a unit reference, so the random-phase
  // fill resynthesizes at most ~1e-5-scale magnitudes per cell.
  for (double s : y.samples) CHECK(std::abs(s) < 1e-5);
}

TEST_CASE("pghi keeps pop transients sharp where noised IF smears them") {
  const TfParams p = gauss_params();
  AudioBuffer pop = gen_pop({4.0, 0.02, 72.0, 1.0, 17}, 16000);
  const auto onsets = detect_onsets(pop);
  REQUIRE(!onsets.empty());
  const double orig = onset_sharpness(pop, onsets, 64);

  const double sigma = 0.3;
  // PGHI pathway on the noised log magnitude.
  LogMagSpectrogram lm = log_magnitude(stft(pop, p));
  // Noise scaled into magnitude units comparably to the IF sigma.
  AudioBuffer y_pghi =
      pghi_invert(inject_noise(lm, sigma, NoiseChannel::kMagnitude, 3), 1e-7, 3);
  // IF pathway on the noised IF channel (Hann analysis as used there).
  TfParams hp = p;
  hp.window = WindowKind::kHann;
  IfSpectrogram rep = compute_if(stft(pop, hp));
  AudioBuffer y_if = invert_if(inject_noise(rep, sigma, NoiseChannel::kIf, 3));

  const double s_pghi = onset_sharpness(y_pghi, onsets, 64);
  const double s_if = onset_sharpness(y_if, onsets, 64);
  CHECK(s_pghi > s_if);
  CHECK(std::abs(s_pghi - orig) / orig < 0.25);
}
