// Copyright 2026 tfsyn authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef TFSYN_TYPES_HPP_
#define TFSYN_TYPES_HPP_

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tfsyn {

// Mono waveform plus its sample rate. Samples are nominally in [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 16000;

  int length() const { return static_cast<int>(samples.size()); }
  double duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

enum class WindowKind { kHann, kTruncatedGaussian };

// Analysis/synthesis settings. gamma is the Gaussian time-frequency ratio
// in samples^2; <= 0 selects the default hop * fft_size.
struct TfParams {
  int fft_size = 512;
  int hop = 128;
  WindowKind window = WindowKind::kTruncatedGaussian;
  double gamma = 0.0;
  double dynamic_range_db = 100.0;

  int bins() const { return fft_size / 2 + 1; }
  double redundancy() const {
    return static_cast<double>(fft_size) / hop;
  }
  double effective_gamma() const {
    return gamma > 0.0 ? gamma : static_cast<double>(hop) * fft_size;
  }
  void validate() const {
    if (fft_size <= 0 || fft_size % 2 != 0)
      throw std::invalid_argument("fft_size must be positive and even");
    if (hop <= 0) throw std::invalid_argument("hop must be positive");
    if (hop > fft_size) throw std::invalid_argument("hop must not exceed fft_size");
    if (gamma < 0.0) throw std::invalid_argument("gamma must be positive");
    if (dynamic_range_db <= 0.0)
      throw std::invalid_argument("dynamic_range_db must be positive");
  }
};

// Dense bin-major matrix: element (bin, frame) at bin * frames + frame.
template <typename T>
struct Matrix {
  int bins = 0;
  int frames = 0;
  std::vector<T> data;

  Matrix() = default;
  Matrix(int b, int f, T fill = T{})
      : bins(b), frames(f), data(static_cast<size_t>(b) * f, fill) {}

  T& operator()(int m, int n) { return data[static_cast<size_t>(m) * frames + n]; }
  const T& operator()(int m, int n) const {
    return data[static_cast<size_t>(m) * frames + n];
  }
  bool same_shape(int b, int f) const { return bins == b && frames == f; }
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<std::complex<double>>;

struct ComplexSpectrogram {
  ComplexMatrix coefficients;  // (fft_size/2 + 1) x frames
  TfParams params;
  int signal_length = 0;  // original sample count, for exact inversion

  int bins() const { return coefficients.bins; }
  int frames() const { return coefficients.frames; }
};

struct LogMagSpectrogram {
  RealMatrix values;  // natural-log magnitudes, clipped at `floor`
  double floor = 0.0;
  TfParams params;
  int signal_length = 0;
};

struct IfSpectrogram {
  RealMatrix log_mag;
  RealMatrix if_channel;  // radians per hop, principal values in (-pi, pi]
  double floor = 0.0;
  TfParams params;
  int signal_length = 0;
};

constexpr double kPi = 3.14159265358979323846;

// Principal value in (-pi, pi].
inline double wrap_phase(double x) {
  double w = std::remainder(x, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

}  // namespace tfsyn

#endif  // TFSYN_TYPES_HPP_
