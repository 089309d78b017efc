// Copyright 2026 tfsyn authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef TFSYN_REPRESENTATIONS_HPP_
#define TFSYN_REPRESENTATIONS_HPP_

#include <cstdint>

#include "tfsyn/types.hpp"

namespace tfsyn {

enum class NoiseChannel { kIf, kMagnitude };

// Per-bin phase difference across frames, as principal values in
// (-pi, pi]. Frame 0 carries the wrapped absolute phase, so the
// cumulative sum restores absolute phase exactly. Cells at the
// log-magnitude floor contribute phase 0.
IfSpectrogram compute_if(const ComplexSpectrogram& spec);

// Cumulative-sum phase reconstruction followed by istft. refinement_iters
// applies that many Griffin-Lim iterations seeded with the restored phase.
AudioBuffer invert_if(const IfSpectrogram& rep, int refinement_iters = 0);

// Seeded i.i.d. Gaussian noise on one channel. The IF channel is
// re-wrapped to (-pi, pi]; the magnitude channel is re-floored.
IfSpectrogram inject_noise(const IfSpectrogram& rep, double sigma,
                           NoiseChannel channel, uint64_t seed);
LogMagSpectrogram inject_noise(const LogMagSpectrogram& rep, double sigma,
                               NoiseChannel channel, uint64_t seed);

}  // namespace tfsyn

#endif  // TFSYN_REPRESENTATIONS_HPP_
