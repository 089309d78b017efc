// Copyright 2026 tfsyn authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef TFSYN_WAV_HPP_
#define TFSYN_WAV_HPP_

#include <string>

#include "tfsyn/types.hpp"

namespace tfsyn {

// PCM 16-bit little-endian mono; the reader also accepts 32-bit float mono.
AudioBuffer read_wav(const std::string& path);
void write_wav(const std::string& path, const AudioBuffer& audio);

}  // namespace tfsyn

#endif  // TFSYN_WAV_HPP_
