// Copyright 2026 tfsyn authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "tfsyn/tfs1.hpp"

#include <cstring>
#include <fstream>
#include <vector>

namespace tfsyn {

namespace {

void put_u32(std::ofstream& f, uint32_t x) {
  uint8_t b[4] = {uint8_t(x & 0xff), uint8_t((x >> 8) & 0xff),
                  uint8_t((x >> 16) & 0xff), uint8_t((x >> 24) & 0xff)};
  f.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t get_u32(std::ifstream& f, const std::string& path) {
  uint8_t b[4];
  f.read(reinterpret_cast<char*>(b), 4);
  if (!f) throw std::runtime_error(path + ": truncated header");
  return b[0] | (b[1] << 8) | (b[2] << 16) | (uint32_t(b[3]) << 24);
}

void put_floats(std::ofstream& f, const std::vector<float>& v) {
  static_assert(sizeof(float) == 4);
  f.write(reinterpret_cast<const char*>(v.data()),
          static_cast<std::streamsize>(v.size() * 4));
}

std::vector<float> get_floats(std::ifstream& f, size_t count,
                              const std::string& path) {
  std::vector<float> v(count);
  f.read(reinterpret_cast<char*>(v.data()),
         static_cast<std::streamsize>(count * 4));
  if (!f) throw std::runtime_error(path + ": truncated payload");
  return v;
}

std::vector<float> to_f32(const RealMatrix& m) {
  std::vector<float> v(m.data.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = static_cast<float>(m.data[i]);
  return v;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

void write_header(std::ofstream& f, uint32_t channels, uint32_t bins,
                  uint32_t frames, uint32_t flags) {
  f.write("TFS1", 4);
  put_u32(f, channels);
  put_u32(f, bins);
  put_u32(f, frames);
  put_u32(f, flags);
}

}  // namespace

void write_tfs1(const std::string& path, const LogMagSpectrogram& rep) {
  auto f = open_out(path);
  write_header(f, 1, rep.values.bins, rep.values.frames, kTfs1HasLogMag);
  put_floats(f, to_f32(rep.values));
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_tfs1(const std::string& path, const IfSpectrogram& rep) {
  auto f = open_out(path);
  write_header(f, 2, rep.log_mag.bins, rep.log_mag.frames,
               kTfs1HasLogMag | kTfs1HasIf);
  put_floats(f, to_f32(rep.log_mag));
  put_floats(f, to_f32(rep.if_channel));
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_tfs1(const std::string& path, const ComplexSpectrogram& spec) {
  auto f = open_out(path);
  write_header(f, 1, spec.bins(), spec.frames(), kTfs1Complex);
  std::vector<float> v(spec.coefficients.data.size() * 2);
  for (size_t i = 0; i < spec.coefficients.data.size(); ++i) {
    v[2 * i] = static_cast<float>(spec.coefficients.data[i].real());
    v[2 * i + 1] = static_cast<float>(spec.coefficients.data[i].imag());
  }
  put_floats(f, v);
  if (!f) throw std::runtime_error("write failed: " + path);
}

Tfs1File read_tfs1(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  char magic[4];
  f.read(magic, 4);
  if (!f || std::memcmp(magic, "TFS1", 4) != 0)
    throw std::runtime_error(path + ": bad magic (expected TFS1)");
  const uint32_t channels = get_u32(f, path);
  const uint32_t bins = get_u32(f, path);
  const uint32_t frames = get_u32(f, path);
  const uint32_t flags = get_u32(f, path);
  if (bins == 0 || frames == 0)
    throw std::runtime_error(path + ": empty dimensions");

  Tfs1File out;
  out.flags = flags;
  out.bins = static_cast<int>(bins);
  out.frames = static_cast<int>(frames);
  const size_t cells = static_cast<size_t>(bins) * frames;

  if (flags & kTfs1Complex) {
    if (channels != 1)
      throw std::runtime_error(path + ": complex payload must be 1 channel");
    auto v = get_floats(f, cells * 2, path);
    out.complex_data = ComplexMatrix(out.bins, out.frames);
    for (size_t i = 0; i < cells; ++i)
      out.complex_data.data[i] = {v[2 * i], v[2 * i + 1]};
    return out;
  }

  uint32_t expect = ((flags & kTfs1HasLogMag) ? 1 : 0) +
                    ((flags & kTfs1HasIf) ? 1 : 0);
  if (expect == 0 || channels != expect)
    throw std::runtime_error(path + ": channel count does not match flags");
  if (flags & kTfs1HasLogMag) {
    auto v = get_floats(f, cells, path);
    out.log_mag = RealMatrix(out.bins, out.frames);
    for (size_t i = 0; i < cells; ++i) out.log_mag.data[i] = v[i];
  }
  if (flags & kTfs1HasIf) {
    auto v = get_floats(f, cells, path);
    out.if_channel = RealMatrix(out.bins, out.frames);
    for (size_t i = 0; i < cells; ++i) out.if_channel.data[i] = v[i];
  }
  return out;
}

}  // namespace tfsyn
