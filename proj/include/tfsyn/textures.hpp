// Copyright 2026 tfsyn authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef TFSYN_TEXTURES_HPP_
#define TFSYN_TEXTURES_HPP_

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tfsyn/types.hpp"

namespace tfsyn {

enum class Family { kPops, kChirps, kTones };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

// Bandpassed noise bursts with jittered onsets.
struct PopSpec {
  double rate = 4.0;          // events per second, 2..16
  double irregularity = 0.04; // std of Gaussian onset jitter, seconds, 0.04..0.4
  double midi_pitch = 69.0;   // bandpass center, MIDI 69..81 (440..880 Hz)
  double duration = 1.0;
  uint64_t seed = 0;
};

// Pairs of exponential sweeps an octave apart.
struct ChirpSpec {
  double rate = 4.0;
  double irregularity = 0.04;
  int sweep_octaves = 1;       // one of {-3, -1, 1, 3}
  double event_duration = 0.1; // seconds, 0.02..0.2
  double midi_pitch = 69.0;
  double duration = 1.0;
  uint64_t seed = 0;
};

// Decaying harmonic tone, the pitched-instrument stand-in.
struct ToneSpec {
  int midi_pitch = 57;  // 44..70
  int num_harmonics = 8;
  double decay_rate = 2.0;  // 1/s
  double duration = 1.0;
  uint64_t seed = 0;
};

inline double midi_to_hz(double pitch) {
  return 440.0 * std::pow(2.0, (pitch - 69.0) / 12.0);
}

AudioBuffer gen_pop(const PopSpec& spec, int sample_rate = 16000);
AudioBuffer gen_chirp(const ChirpSpec& spec, int sample_rate = 16000);
AudioBuffer gen_tone(const ToneSpec& spec, int sample_rate = 16000);

struct CorpusEntry {
  std::string path;  // relative to the manifest's directory
  Family family = Family::kPops;
  std::map<std::string, double> params;
  uint64_t seed = 0;
  bool failed = false;
  std::string error;
};

struct CorpusManifest {
  int format_version = 1;
  std::vector<CorpusEntry> entries;
};

struct CorpusOptions {
  // Number of values kept per continuous parameter axis; 0 keeps the
  // full grid (21 for pops, the per-axis counts for chirps).
  int grid_subsample = 0;
  uint64_t master_seed = 0;
  // Enumerate the grid and write the manifest without rendering audio.
  bool manifest_only = false;
  int sample_rate = 16000;
};

// Full Cartesian grid for one family; audio as WAV plus a manifest
// (manifest.jsonl) in out_dir. Per-entry failures are recorded in the
// manifest, not thrown.
CorpusManifest gen_corpus(Family family, const CorpusOptions& options,
                          const std::string& out_dir);

void write_manifest(const std::string& path, const CorpusManifest& manifest);
CorpusManifest read_manifest(const std::string& path);

// Deterministic per-entry seed derivation.
uint64_t derive_seed(uint64_t master_seed, uint64_t index);

}  // namespace tfsyn

#endif  // TFSYN_TEXTURES_HPP_
