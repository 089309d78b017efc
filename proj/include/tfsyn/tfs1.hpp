// Copyright 2026 tfsyn authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef TFSYN_TFS1_HPP_
#define TFSYN_TFS1_HPP_

#include <cstdint>
#include <string>

#include "tfsyn/types.hpp"

namespace tfsyn {

// "TFS1" container: magic, little-endian u32 {channels, bins, frames,
// flags}, then channel-major float32 payload. Flag bits: 0 log-magnitude,
// 1 instantaneous frequency, 2 complex (re/im interleaved).
constexpr uint32_t kTfs1HasLogMag = 1u << 0;
constexpr uint32_t kTfs1HasIf = 1u << 1;
constexpr uint32_t kTfs1Complex = 1u << 2;

struct Tfs1File {
  uint32_t flags = 0;
  int bins = 0;
  int frames = 0;
  RealMatrix log_mag;
  RealMatrix if_channel;
  ComplexMatrix complex_data;
};

Tfs1File read_tfs1(const std::string& path);

void write_tfs1(const std::string& path, const LogMagSpectrogram& rep);
void write_tfs1(const std::string& path, const IfSpectrogram& rep);
void write_tfs1(const std::string& path, const ComplexSpectrogram& spec);

}  // namespace tfsyn

#endif  // TFSYN_TFS1_HPP_
