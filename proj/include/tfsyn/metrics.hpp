// Copyright 2026 tfsyn authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef TFSYN_METRICS_HPP_
#define TFSYN_METRICS_HPP_

#include "tfsyn/types.hpp"

namespace tfsyn {

// SNR values are capped here instead of reporting +inf.
constexpr double kSnrCapDb = 300.0;

// Relative Frobenius distance between magnitude spectrograms. The
// estimate is padded or cropped to the reference length first.
double spectral_convergence(const AudioBuffer& ref, const AudioBuffer& est,
                            const TfParams& params);

// RMS of dB magnitude differences over cells where the reference is
// above its log floor.
double log_spectral_distance(const AudioBuffer& ref, const AudioBuffer& est,
                             const TfParams& params);

// 10*log10(||ref||^2 / ||ref - est'||^2); with align set, est' is est
// after optimal global delay and sign alignment by cross-correlation.
double snr_db(const AudioBuffer& ref, const AudioBuffer& est,
              bool align = false);

// Mean over detected onsets of the maximum absolute sample slope in a
// short neighborhood of each onset. Onsets are taken from `ref` so the
// same instants are probed in both signals.
double onset_sharpness(const AudioBuffer& audio,
                       const std::vector<int>& onsets, int radius);

// Envelope-threshold onset picker (also the test oracle for event counts).
std::vector<int> detect_onsets(const AudioBuffer& audio,
                               double threshold_ratio = 0.25,
                               double min_gap_seconds = 0.025);

}  // namespace tfsyn

#endif  // TFSYN_METRICS_HPP_
