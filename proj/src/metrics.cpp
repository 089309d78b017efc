// Copyright 2026 tfsyn authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "tfsyn/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "tfsyn/stft.hpp"

namespace tfsyn {

namespace {

constexpr int kMaxAlignLag = 1024;

AudioBuffer fit_length(const AudioBuffer& est, int length) {
  AudioBuffer out = est;
  out.samples.resize(length, 0.0);
  return out;
}

double energy(const std::vector<double>& v) {
  double e = 0.0;
  for (double s : v) e += s * s;
  return e;
}

}  // namespace

double spectral_convergence(const AudioBuffer& ref, const AudioBuffer& est,
                            const TfParams& params) {
  if (energy(ref.samples) == 0.0)
    throw std::invalid_argument("all-zero reference");
  ComplexSpectrogram sr = stft(ref, params);
  ComplexSpectrogram se = stft(fit_length(est, ref.length()), params);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < sr.coefficients.data.size(); ++i) {
    const double mr = std::abs(sr.coefficients.data[i]);
    const double me = std::abs(se.coefficients.data[i]);
    num += (mr - me) * (mr - me);
    den += mr * mr;
  }
  return std::sqrt(num / den);
}

double log_spectral_distance(const AudioBuffer& ref, const AudioBuffer& est,
                             const TfParams& params) {
  LogMagSpectrogram lr = log_magnitude(stft(ref, params));
  ComplexSpectrogram se = stft(fit_length(est, ref.length()), params);
  if (!se.coefficients.same_shape(lr.values.bins, lr.values.frames))
    throw std::invalid_argument("spectrogram dimensions differ");
  constexpr double kDbPerNat = 20.0 / 2.302585092994046;
  double sum = 0.0;
  size_t count = 0;
  for (size_t i = 0; i < lr.values.data.size(); ++i) {
    if (lr.values.data[i] <= lr.floor) continue;
    const double me = std::abs(se.coefficients.data[i]);
    const double le = std::max(me > 0.0 ? std::log(me) : lr.floor, lr.floor);
    const double d = kDbPerNat * (lr.values.data[i] - le);
    sum += d * d;
    ++count;
  }
  if (count == 0) throw std::invalid_argument("reference entirely at floor");
  return std::sqrt(sum / count);
}

double snr_db(const AudioBuffer& ref, const AudioBuffer& est, bool align) {
  const double ref_energy = energy(ref.samples);
  if (ref_energy == 0.0) throw std::invalid_argument("all-zero reference");
  const int n = ref.length();

  int best_lag = 0;
  double sign = 1.0;
  if (align) {
    double best = 0.0;
    const int max_lag = std::min(kMaxAlignLag, n - 1);
    for (int lag = -max_lag; lag <= max_lag; ++lag) {
      double corr = 0.0;
      for (int t = 0; t < n; ++t) {
        const int u = t + lag;
        if (u >= 0 && u < est.length()) corr += ref.samples[t] * est.samples[u];
      }
      if (std::abs(corr) > std::abs(best)) {
        best = corr;
        best_lag = lag;
      }
    }
    sign = best < 0.0 ? -1.0 : 1.0;
  }

  double err = 0.0;
  for (int t = 0; t < n; ++t) {
    const int u = t + best_lag;
    const double e = (u >= 0 && u < est.length()) ? sign * est.samples[u] : 0.0;
    err += (ref.samples[t] - e) * (ref.samples[t] - e);
  }
  if (err == 0.0) return kSnrCapDb;
  return std::min(10.0 * std::log10(ref_energy / err), kSnrCapDb);
}

std::vector<int> detect_onsets(const AudioBuffer& audio, double threshold_ratio,
                               double min_gap_seconds) {
  const int n = audio.length();
  const int win = std::max(1, audio.sample_rate / 1000);  // 1 ms envelope
  std::vector<double> env(n, 0.0);
  double acc = 0.0;
  for (int t = 0; t < n; ++t) {
    acc += std::abs(audio.samples[t]);
    if (t >= win) acc -= std::abs(audio.samples[t - win]);
    env[t] = acc / win;
  }
  const double peak = *std::max_element(env.begin(), env.end());
  if (peak <= 0.0) return {};
  const double thresh = threshold_ratio * peak;
  const int min_gap = static_cast<int>(min_gap_seconds * audio.sample_rate);

  std::vector<int> onsets;
  int last = -min_gap - 1;
  bool above = false;
  for (int t = 0; t < n; ++t) {
    if (!above && env[t] >= thresh) {
      if (t - last > min_gap) onsets.push_back(std::max(0, t - win));
      last = t;
      above = true;
    } else if (above && env[t] < 0.5 * thresh) {
      above = false;
    }
  }
  return onsets;
}

double onset_sharpness(const AudioBuffer& audio, const std::vector<int>& onsets,
                       int radius) {
  if (onsets.empty()) throw std::invalid_argument("no onsets to probe");
  double sum = 0.0;
  for (int onset : onsets) {
    double peak_slope = 0.0;
    const int lo = std::max(0, onset - radius);
    const int hi = std::min(audio.length() - 1, onset + radius);
    for (int t = lo; t < hi; ++t)
      peak_slope =
          std::max(peak_slope, std::abs(audio.samples[t + 1] - audio.samples[t]));
    sum += peak_slope;
  }
  return sum / onsets.size();
}

}  // namespace tfsyn
