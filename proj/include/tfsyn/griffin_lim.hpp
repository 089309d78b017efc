// Copyright 2026 tfsyn authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef TFSYN_GRIFFIN_LIM_HPP_
#define TFSYN_GRIFFIN_LIM_HPP_

#include <optional>
#include <vector>

#include "tfsyn/types.hpp"

namespace tfsyn {

struct GlConfig {
  int iterations = 60;
  std::optional<RealMatrix> init_phase;  // zeros when absent
};

struct GlResult {
  AudioBuffer audio;
  // inconsistency[k] = || |stft(x_k)| - target ||_F / ||target||_F after
  // iteration k; non-increasing for the classical update.
  std::vector<double> inconsistency;
};

GlResult griffin_lim(const LogMagSpectrogram& mag, const GlConfig& cfg);

}  // namespace tfsyn

#endif  // TFSYN_GRIFFIN_LIM_HPP_
