// Copyright 2026 tfsyn authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "tfsyn/stft.hpp"

#include <fftw3.h>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <mutex>

namespace tfsyn {

namespace {

constexpr double kLn10Over20 = 0.11512925464970229;  // dB -> nats

// FFTW planning is not thread-safe; executing a plan on new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void check_audio(const AudioBuffer& audio) {
  if (audio.samples.empty()) throw std::invalid_argument("empty audio");
  if (audio.sample_rate <= 0) throw std::invalid_argument("bad sample rate");
  for (double s : audio.samples)
    if (!std::isfinite(s)) throw std::invalid_argument("non-finite sample");
}

void check_spec(const ComplexSpectrogram& spec) {
  spec.params.validate();
  const int M = spec.params.fft_size;
  if (spec.coefficients.bins != M / 2 + 1)
    throw std::invalid_argument("bin count does not match fft_size");
  if (spec.coefficients.frames <= 0)
    throw std::invalid_argument("spectrogram has no frames");
  if (spec.signal_length <= 0)
    throw std::invalid_argument("missing signal length");
  for (const auto& c : spec.coefficients.data)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw std::invalid_argument("non-finite coefficient");
}

}  // namespace

Window make_window(const TfParams& params) {
  params.validate();
  const int M = params.fft_size;
  const int c = M / 2;
  Window w;
  w.kind = params.window;
  w.taps.resize(M);
  if (params.window == WindowKind::kHann) {
    for (int k = 0; k < M; ++k)
      w.taps[k] = 0.5 - 0.5 * std::cos(2.0 * kPi * k / M);
  } else {
    const double gamma = params.effective_gamma();
    for (int k = 0; k < M; ++k) {
      const double d = k - c;
      w.taps[k] = std::exp(-kPi * d * d / gamma);
    }
  }
  return w;
}

int reflect_index(int t, int length) {
  if (length == 1) return 0;
  const int period = 2 * (length - 1);
  int r = t % period;
  if (r < 0) r += period;
  return r < length ? r : period - r;
}

ComplexSpectrogram stft(const AudioBuffer& audio, const TfParams& params) {
  check_audio(audio);
  params.validate();
  const int M = params.fft_size;
  const int a = params.hop;
  const int L = audio.length();
  const int N = num_frames(L, a);
  const Window win = make_window(params);

  // Padded timeline: frame n occupies samples [n*a, n*a + M).
  const int padded = (N - 1) * a + M;
  std::vector<double> p(padded);
  for (int s = 0; s < padded; ++s)
    p[s] = audio.samples[reflect_index(s - M / 2, L)];

  ComplexSpectrogram out;
  out.params = params;
  out.signal_length = L;
  out.coefficients = ComplexMatrix(M / 2 + 1, N);

  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    double* in = fftw_alloc_real(M);
    fftw_complex* fo = fftw_alloc_complex(M / 2 + 1);
    plan = fftw_plan_dft_r2c_1d(M, in, fo, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(fo);
  }

#pragma omp parallel
  {
    double* in = fftw_alloc_real(M);
    fftw_complex* fo = fftw_alloc_complex(M / 2 + 1);
#pragma omp for schedule(static)
    for (int n = 0; n < N; ++n) {
      const double* seg = p.data() + static_cast<size_t>(n) * a;
      for (int j = 0; j < M; ++j) in[j] = win.taps[j] * seg[j];
      fftw_execute_dft_r2c(plan, in, fo);
      for (int m = 0; m <= M / 2; ++m) {
        // (-1)^m undoes the half-frame shift: phase referenced to the
        // frame center rather than its left edge.
        const double sgn = (m & 1) ? -1.0 : 1.0;
        out.coefficients(m, n) = {sgn * fo[m][0], sgn * fo[m][1]};
      }
    }
    fftw_free(in);
    fftw_free(fo);
  }
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

AudioBuffer istft(const ComplexSpectrogram& spec) {
  check_spec(spec);
  const TfParams& params = spec.params;
  const int M = params.fft_size;
  const int a = params.hop;
  const int N = spec.frames();
  const int L = spec.signal_length;
  const Window win = make_window(params);
  const int padded = (N - 1) * a + M;

  // Per-frame inverse DFT; y(n, j) = w[j] * p[n*a + j] for consistent input.
  std::vector<double> y(static_cast<size_t>(N) * M);

  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_complex* fi = fftw_alloc_complex(M / 2 + 1);
    double* outb = fftw_alloc_real(M);
    plan = fftw_plan_dft_c2r_1d(M, fi, outb, FFTW_ESTIMATE);
    fftw_free(fi);
    fftw_free(outb);
  }

#pragma omp parallel
  {
    fftw_complex* fi = fftw_alloc_complex(M / 2 + 1);
    double* outb = fftw_alloc_real(M);
#pragma omp for schedule(static)
    for (int n = 0; n < N; ++n) {
      for (int m = 0; m <= M / 2; ++m) {
        const double sgn = (m & 1) ? -1.0 : 1.0;
        const auto& c = spec.coefficients(m, n);
        fi[m][0] = sgn * c.real();
        fi[m][1] = sgn * c.imag();
      }
      fftw_execute_dft_c2r(plan, fi, outb);
      double* yn = y.data() + static_cast<size_t>(n) * M;
      for (int j = 0; j < M; ++j) yn[j] = outb[j] / M;
    }
    fftw_free(fi);
    fftw_free(outb);
  }
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  // Dual-window overlap-add per padded sample: fixed frame order keeps
  // the result independent of the thread count.
  std::vector<double> num(padded, 0.0), den(padded, 0.0);
#pragma omp parallel for schedule(static)
  for (int s = 0; s < padded; ++s) {
    const int q = s - M + 1;
    const int n_lo = q <= 0 ? 0 : (q + a - 1) / a;
    const int n_hi = std::min(N - 1, s / a);
    double ns = 0.0, ds = 0.0;
    for (int n = n_lo; n <= n_hi; ++n) {
      const int j = s - n * a;
      ns += win.taps[j] * y[static_cast<size_t>(n) * M + j];
      ds += win.taps[j] * win.taps[j];
    }
    num[s] = ns;
    den[s] = ds;
  }

  // Fold edge reflections back onto the source samples (least squares
  // against the reflect-padded analysis).
  std::vector<double> numf(L, 0.0), denf(L, 0.0);
  for (int s = 0; s < padded; ++s) {
    const int t = reflect_index(s - M / 2, L);
    numf[t] += num[s];
    denf[t] += den[s];
  }

  AudioBuffer out;
  out.sample_rate = 16000;
  out.samples.resize(L);
  for (int t = 0; t < L; ++t)
    out.samples[t] = denf[t] > 0.0 ? numf[t] / denf[t] : 0.0;
  return out;
}

LogMagSpectrogram log_magnitude(const ComplexSpectrogram& spec) {
  check_spec(spec);
  LogMagSpectrogram out;
  out.params = spec.params;
  out.signal_length = spec.signal_length;
  out.values = RealMatrix(spec.bins(), spec.frames());
  double max_mag = 0.0;
  for (const auto& c : spec.coefficients.data)
    max_mag = std::max(max_mag, std::abs(c));
  const double log_max = max_mag > 0.0 ? std::log(max_mag) : 0.0;
  out.floor = log_max - spec.params.dynamic_range_db * kLn10Over20;
  for (size_t i = 0; i < spec.coefficients.data.size(); ++i) {
    const double mag = std::abs(spec.coefficients.data[i]);
    out.values.data[i] =
        mag > 0.0 ? std::max(std::log(mag), out.floor) : out.floor;
  }
  return out;
}

namespace ref {

ComplexSpectrogram stft(const AudioBuffer& audio, const TfParams& params) {
  check_audio(audio);
  params.validate();
  const int M = params.fft_size;
  const int a = params.hop;
  const int L = audio.length();
  const int N = num_frames(L, a);
  const Window win = make_window(params);
  const int padded = (N - 1) * a + M;
  std::vector<double> p(padded);
  for (int s = 0; s < padded; ++s)
    p[s] = audio.samples[reflect_index(s - M / 2, L)];

  ComplexSpectrogram out;
  out.params = params;
  out.signal_length = L;
  out.coefficients = ComplexMatrix(M / 2 + 1, N);
  for (int n = 0; n < N; ++n) {
    const double* seg = p.data() + static_cast<size_t>(n) * a;
    for (int m = 0; m <= M / 2; ++m) {
      std::complex<double> acc = 0.0;
      for (int j = 0; j < M; ++j) {
        const double ang = -2.0 * kPi * m * (j - M / 2) / M;
        acc += win.taps[j] * seg[j] *
               std::complex<double>(std::cos(ang), std::sin(ang));
      }
      out.coefficients(m, n) = acc;
    }
  }
  return out;
}

AudioBuffer istft(const ComplexSpectrogram& spec) {
  check_spec(spec);
  const TfParams& params = spec.params;
  const int M = params.fft_size;
  const int a = params.hop;
  const int N = spec.frames();
  const int L = spec.signal_length;
  const Window win = make_window(params);
  const int padded = (N - 1) * a + M;

  std::vector<double> num(padded, 0.0), den(padded, 0.0);
  std::vector<double> yn(M);
  for (int n = 0; n < N; ++n) {
    for (int j = 0; j < M; ++j) {
      // Real inverse DFT with the same center-shift convention.
      double acc = spec.coefficients(0, n).real();
      for (int m = 1; m <= M / 2; ++m) {
        const double ang = 2.0 * kPi * m * (j - M / 2) / M;
        const auto& c = spec.coefficients(m, n);
        const double w = (m == M / 2) ? 1.0 : 2.0;
        acc += w * (c.real() * std::cos(ang) - c.imag() * std::sin(ang));
      }
      yn[j] = acc / M;
    }
    for (int j = 0; j < M; ++j) {
      num[n * a + j] += win.taps[j] * yn[j];
      den[n * a + j] += win.taps[j] * win.taps[j];
    }
  }

  std::vector<double> numf(L, 0.0), denf(L, 0.0);
  for (int s = 0; s < padded; ++s) {
    const int t = reflect_index(s - M / 2, L);
    numf[t] += num[s];
    denf[t] += den[s];
  }
  AudioBuffer out;
  out.sample_rate = 16000;
  out.samples.resize(L);
  for (int t = 0; t < L; ++t)
    out.samples[t] = denf[t] > 0.0 ? numf[t] / denf[t] : 0.0;
  return out;
}

}  // namespace ref

}  // namespace tfsyn
