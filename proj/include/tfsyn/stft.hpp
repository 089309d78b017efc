// Copyright 2026 tfsyn authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef TFSYN_STFT_HPP_
#define TFSYN_STFT_HPP_

#include "tfsyn/types.hpp"

namespace tfsyn {

struct Window {
  std::vector<double> taps;  // length fft_size, peak 1 at fft_size/2
  WindowKind kind = WindowKind::kHann;
};

Window make_window(const TfParams& params);

// Frames are centered at n*hop; the signal is reflection-padded at the
// edges and the windowed segment is circularly shifted by fft_size/2
// before the DFT so that stationary tones carry a flat phase across
// frequency at their peak.
ComplexSpectrogram stft(const AudioBuffer& audio, const TfParams& params);

// Least-squares inverse: dual-window overlap-add on the padded timeline
// with the edge reflections folded back, so istft(stft(x)) == x up to
// round-off and griffin_lim's projection is a true pseudo-inverse.
AudioBuffer istft(const ComplexSpectrogram& spec);

LogMagSpectrogram log_magnitude(const ComplexSpectrogram& spec);

// Number of frames for a given signal length and hop.
inline int num_frames(int length, int hop) {
  return (length + hop - 1) / hop;
}

// Maps an index on the padded timeline (offset fft_size/2) back to the
// source sample via symmetric reflection about the signal edges.
int reflect_index(int t, int length);

namespace ref {
// Serial O(M^2) direct-DFT implementations, kept as the oracle for the
// FFT-based kernels and as the baseline in the benchmark target.
ComplexSpectrogram stft(const AudioBuffer& audio, const TfParams& params);
AudioBuffer istft(const ComplexSpectrogram& spec);
}  // namespace ref

}  // namespace tfsyn

#endif  // TFSYN_STFT_HPP_
