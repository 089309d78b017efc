// Copyright 2026 tfsyn authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef TFSYN_PGHI_HPP_
#define TFSYN_PGHI_HPP_

#include <cstdint>

#include "tfsyn/types.hpp"

namespace tfsyn {

// Phase gradients estimated from the log magnitude of a Gaussian-window
// analysis. dphase_dt is radians per hop, dphase_df radians per bin step.
struct PhaseGradients {
  RealMatrix dphase_dt;
  RealMatrix dphase_df;
  TfParams params;
};

// Requires a truncated-Gaussian analysis with redundancy fft_size/hop >= 4.
PhaseGradients phase_gradients(const LogMagSpectrogram& logmag);

// Integrates the gradients over magnitude-descending contours. Cells below
// tol * max-magnitude get seeded uniform random phase in (-pi, pi].
RealMatrix heap_integrate(const LogMagSpectrogram& logmag,
                          const PhaseGradients& grads, double tol,
                          uint64_t seed = 0);

constexpr double kPghiDefaultTol = 1e-7;

AudioBuffer pghi_invert(const LogMagSpectrogram& logmag,
                        double tol = kPghiDefaultTol, uint64_t seed = 0);

}  // namespace tfsyn

#endif  // TFSYN_PGHI_HPP_
