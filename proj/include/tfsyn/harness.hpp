// Copyright 2026 tfsyn authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef TFSYN_HARNESS_HPP_
#define TFSYN_HARNESS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "tfsyn/textures.hpp"
#include "tfsyn/types.hpp"

namespace tfsyn {

enum class Pipeline { kIf, kPghi, kGriffinLim };

std::string pipeline_name(Pipeline p);
Pipeline pipeline_from_name(const std::string& name);

// Robustness sweep: clean clip -> representation -> channel noise ->
// inversion -> scores against the clean original.
struct ExperimentConfig {
  std::vector<Family> families = {Family::kPops, Family::kChirps,
                                  Family::kTones};
  std::vector<Pipeline> pipelines = {Pipeline::kIf, Pipeline::kPghi};
  std::vector<int> hops = {64, 128};  // fft_size 512, 16 kHz presets
  std::vector<double> noise_sigmas = {0.0, 0.1, 0.3, 0.5};
  int clips_per_cell = 25;
  int griffin_lim_iterations = 60;
  double pghi_tol = 1e-7;
  uint64_t master_seed = 1;
  std::string output;  // directory for report files; empty = don't write

  void validate() const;
};

struct CellResult {
  Family family;
  Pipeline pipeline;
  int hop = 0;
  double sigma = 0.0;
  int clips = 0;
  double sc_mean = 0.0, sc_std = 0.0;
  double lsd_mean = 0.0, lsd_std = 0.0;
  double snr_mean = 0.0, snr_std = 0.0;
  double frechet = 0.0;
  // Mean per-clip factor mapping the IF-channel sigma onto the
  // log-magnitude channel (equal relative per-channel perturbation).
  double mag_sigma_scale = 0.0;
  int failures = 0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<CellResult> cells;
};

ExperimentReport run_robustness(const ExperimentConfig& config);

// key/value + nested-table text report, and a JSON twin for tooling.
void write_report(const std::string& dir, const ExperimentReport& report);

ExperimentConfig load_config(const std::string& path);

// Harness clip synthesis: per-clip parameters drawn uniformly from the
// family's grid ranges under the given seed.
AudioBuffer make_harness_clip(Family family, uint64_t seed,
                              int sample_rate = 16000);

// Runs one clip through one pipeline with channel noise; exposed for the
// acceptance suite. Returns the inverted audio.
AudioBuffer run_pipeline(const AudioBuffer& clip, Pipeline pipeline, int hop,
                         double sigma, uint64_t seed,
                         const ExperimentConfig& config);

TfParams preset_params(int hop, WindowKind window);

}  // namespace tfsyn

#endif  // TFSYN_HARNESS_HPP_
