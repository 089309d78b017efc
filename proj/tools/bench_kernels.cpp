// Copyright 2026 tfsyn authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Timing comparison: serial direct-DFT reference kernels vs the
// FFT-based OpenMP implementations. Also checks they agree.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "tfsyn/stft.hpp"

using namespace tfsyn;

namespace {

double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch())
      .count();
}

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e30;
  for (int r = 0; r < reps; ++r) {
    const double t0 = now_s();
    f();
    best = std::min(best, now_s() - t0);
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  double seconds = 4.0;
  if (argc > 1) seconds = std::atof(argv[1]);

  AudioBuffer x;
  x.sample_rate = 16000;
  x.samples.resize(static_cast<size_t>(seconds * x.sample_rate));
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 0.25);
  for (double& s : x.samples) s = gauss(rng);

  std::printf("clip: %.1f s at %d Hz, %d OpenMP threads\n", seconds,
              x.sample_rate, omp_get_max_threads());
  std::printf("%-22s %10s %10s %8s %10s\n", "kernel", "serial ms", "omp ms",
              "speedup", "max diff");

  for (int hop : {64, 128}) {
    TfParams p;
    p.fft_size = 512;
    p.hop = hop;
    p.window = WindowKind::kTruncatedGaussian;

    ComplexSpectrogram fast, slow;
    const double t_ref_fwd = time_best_of(3, [&] { slow = ref::stft(x, p); });
    const double t_fwd = time_best_of(3, [&] { fast = stft(x, p); });
    double diff = 0.0;
    for (size_t i = 0; i < fast.coefficients.data.size(); ++i)
      diff = std::max(diff, std::abs(fast.coefficients.data[i] -
                                     slow.coefficients.data[i]));
    std::printf("stft  hop %-3d          %10.2f %10.2f %7.1fx %10.2e\n", hop,
                1e3 * t_ref_fwd, 1e3 * t_fwd, t_ref_fwd / t_fwd, diff);

    AudioBuffer y_fast, y_slow;
    const double t_ref_inv =
        time_best_of(3, [&] { y_slow = ref::istft(slow); });
    const double t_inv = time_best_of(3, [&] { y_fast = istft(fast); });
    diff = 0.0;
    for (int i = 0; i < y_fast.length(); ++i)
      diff = std::max(diff, std::abs(y_fast.samples[i] - y_slow.samples[i]));
    std::printf("istft hop %-3d          %10.2f %10.2f %7.1fx %10.2e\n", hop,
                1e3 * t_ref_inv, 1e3 * t_inv, t_ref_inv / t_inv, diff);
  }
  return 0;
}
