// Copyright 2026 tfsyn authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "tfsyn/representations.hpp"

#include <cmath>
#include <random>

#include "tfsyn/griffin_lim.hpp"
#include "tfsyn/stft.hpp"

namespace tfsyn {

IfSpectrogram compute_if(const ComplexSpectrogram& spec) {
  LogMagSpectrogram lm = log_magnitude(spec);
  const int bins = lm.values.bins;
  const int frames = lm.values.frames;

  IfSpectrogram rep;
  rep.params = spec.params;
  rep.signal_length = spec.signal_length;
  rep.floor = lm.floor;
  rep.log_mag = std::move(lm.values);
  rep.if_channel = RealMatrix(bins, frames);

  for (int m = 0; m < bins; ++m) {
    double prev = 0.0;
    for (int n = 0; n < frames; ++n) {
      const double phase = rep.log_mag(m, n) > rep.floor
                               ? std::arg(spec.coefficients(m, n))
                               : 0.0;
      rep.if_channel(m, n) = wrap_phase(phase - prev);
      prev = phase;
    }
  }
  return rep;
}

AudioBuffer invert_if(const IfSpectrogram& rep, int refinement_iters) {
  if (!rep.if_channel.same_shape(rep.log_mag.bins, rep.log_mag.frames))
    throw std::invalid_argument("IF and log-magnitude dimensions differ");
  if (refinement_iters < 0)
    throw std::invalid_argument("refinement_iters must be >= 0");
  const int bins = rep.log_mag.bins;
  const int frames = rep.log_mag.frames;

  RealMatrix phase(bins, frames);
  for (int m = 0; m < bins; ++m) {
    double acc = 0.0;
    for (int n = 0; n < frames; ++n) {
      acc += rep.if_channel(m, n);
      phase(m, n) = acc;
    }
  }

  LogMagSpectrogram mag;
  mag.values = rep.log_mag;
  mag.floor = rep.floor;
  mag.params = rep.params;
  mag.signal_length = rep.signal_length;

  GlConfig cfg;
  cfg.iterations = refinement_iters;
  cfg.init_phase = std::move(phase);
  return griffin_lim(mag, cfg).audio;
}

IfSpectrogram inject_noise(const IfSpectrogram& rep, double sigma,
                           NoiseChannel channel, uint64_t seed) {
  if (sigma < 0.0) throw std::invalid_argument("sigma must be >= 0");
  IfSpectrogram out = rep;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  if (channel == NoiseChannel::kIf) {
    for (double& v : out.if_channel.data)
      v = wrap_phase(v + sigma * gauss(rng));
  } else {
    for (double& v : out.log_mag.data)
      v = std::max(v + sigma * gauss(rng), out.floor);
  }
  return out;
}

LogMagSpectrogram inject_noise(const LogMagSpectrogram& rep, double sigma,
                               NoiseChannel channel, uint64_t seed) {
  if (sigma < 0.0) throw std::invalid_argument("sigma must be >= 0");
  if (channel == NoiseChannel::kIf)
    throw std::invalid_argument(
        "log-magnitude representation has no IF channel");
  LogMagSpectrogram out = rep;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (double& v : out.values.data)
    v = std::max(v + sigma * gauss(rng), out.floor);
  return out;
}

}  // namespace tfsyn
