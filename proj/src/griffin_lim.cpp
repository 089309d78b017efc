// Copyright 2026 tfsyn authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "tfsyn/griffin_lim.hpp"

#include <cmath>

#include "tfsyn/stft.hpp"

namespace tfsyn {

namespace {

ComplexSpectrogram with_phase(const LogMagSpectrogram& mag,
                              const RealMatrix& phase) {
  ComplexSpectrogram spec;
  spec.params = mag.params;
  spec.signal_length = mag.signal_length;
  spec.coefficients = ComplexMatrix(mag.values.bins, mag.values.frames);
  for (size_t i = 0; i < mag.values.data.size(); ++i) {
    const double m = std::exp(mag.values.data[i]);
    spec.coefficients.data[i] = std::polar(m, phase.data[i]);
  }
  return spec;
}

}  // namespace

GlResult griffin_lim(const LogMagSpectrogram& mag, const GlConfig& cfg) {
  if (cfg.iterations < 0) throw std::invalid_argument("iterations must be >= 0");
  const int bins = mag.values.bins;
  const int frames = mag.values.frames;
  RealMatrix phase(bins, frames, 0.0);
  if (cfg.init_phase) {
    if (!cfg.init_phase->same_shape(bins, frames))
      throw std::invalid_argument("init_phase dimensions do not match magnitude");
    phase = *cfg.init_phase;
  }

  double target_norm = 0.0;
  for (double v : mag.values.data) {
    const double m = std::exp(v);
    target_norm += m * m;
  }
  target_norm = std::sqrt(target_norm);

  GlResult result;
  result.inconsistency.reserve(cfg.iterations);
  for (int k = 0; k < cfg.iterations; ++k) {
    AudioBuffer x = istft(with_phase(mag, phase));
    ComplexSpectrogram s = stft(x, mag.params);
    double err = 0.0;
    for (size_t i = 0; i < s.coefficients.data.size(); ++i) {
      const double d =
          std::abs(s.coefficients.data[i]) - std::exp(mag.values.data[i]);
      err += d * d;
      phase.data[i] = std::arg(s.coefficients.data[i]);
    }
    result.inconsistency.push_back(std::sqrt(err) / target_norm);
  }
  result.audio = istft(with_phase(mag, phase));
  return result;
}

}  // namespace tfsyn
