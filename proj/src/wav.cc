// Copyright 2026 The mrafx Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mrafx/wav.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "mrafx/errors.h"

namespace mrafx {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t U32(const unsigned char* p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t U16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void Put32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}
void Put16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v));
  out.push_back(static_cast<unsigned char>(v >> 8));
}
void PutTag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

WavFormat ParseWavFormat(const std::string& name) {
  if (name == "16") return WavFormat::kPcm16;
  if (name == "24") return WavFormat::kPcm24;
  if (name == "32f" || name == "float") return WavFormat::kFloat32;
  throw ArgumentError("unknown WAV sample format '" + name + "' (16, 24, 32f)");
}

WavData ReadWav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot read " + path);
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw ArgumentError(path + ": not a RIFF/WAVE file");
  }
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::size_t size = U32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = std::min(size, bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0 && avail >= 16) {
      format = U16(chunk + 8);
      channels = U16(chunk + 10);
      rate = U32(chunk + 12);
      bits = U16(chunk + 22);
      if (format == kFormatExtensible && avail >= 26) format = U16(chunk + 32);
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = avail;
    }
    pos = body + size + (size & 1);
  }
  if (!data || rate == 0) throw ArgumentError(path + ": missing fmt or data chunk");
  if (channels != 1) throw ArgumentError(path + ": only mono files are supported");

  WavData out;
  out.rate_hz = rate;
  if (format == kFormatPcm && bits == 16) {
    out.format = WavFormat::kPcm16;
    out.samples.resize(data_size / 2);
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
      out.samples[i] = static_cast<std::int16_t>(U16(data + 2 * i)) / 32768.0;
    }
  } else if (format == kFormatPcm && bits == 24) {
    out.format = WavFormat::kPcm24;
    out.samples.resize(data_size / 3);
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
      const unsigned char* p = data + 3 * i;
      std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
      if (v & 0x800000) v -= 0x1000000;
      out.samples[i] = v / 8388608.0;
    }
  } else if (format == kFormatFloat && bits == 32) {
    out.format = WavFormat::kFloat32;
    out.samples.resize(data_size / 4);
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
      out.samples[i] = std::bit_cast<float>(U32(data + 4 * i));
    }
  } else {
    throw ArgumentError(path + ": unsupported sample format (16/24-bit PCM or "
                               "32-bit float expected)");
  }
  return out;
}

void WriteWav(const std::string& path, std::span<const double> samples,
              double rate_hz, WavFormat format) {
  if (!(rate_hz > 0.0) || rate_hz != std::floor(rate_hz)) {
    throw ArgumentError("WAV rate must be a positive integer");
  }
  const std::uint16_t bits =
      format == WavFormat::kPcm16 ? 16 : format == WavFormat::kPcm24 ? 24 : 32;
  const std::uint16_t block = bits / 8;
  const std::uint32_t data_size = static_cast<std::uint32_t>(samples.size() * block);
  std::vector<unsigned char> out;
  out.reserve(44 + data_size);
  PutTag(out, "RIFF");
  Put32(out, 36 + data_size);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  Put32(out, 16);
  Put16(out, format == WavFormat::kFloat32 ? kFormatFloat : kFormatPcm);
  Put16(out, 1);
  Put32(out, static_cast<std::uint32_t>(rate_hz));
  Put32(out, static_cast<std::uint32_t>(rate_hz) * block);
  Put16(out, block);
  Put16(out, bits);
  PutTag(out, "data");
  Put32(out, data_size);
  for (double x : samples) {
    if (format == WavFormat::kFloat32) {
      Put32(out, std::bit_cast<std::uint32_t>(static_cast<float>(x)));
      continue;
    }
    const double scale = format == WavFormat::kPcm16 ? 32768.0 : 8388608.0;
    const double v = std::clamp(std::round(x * scale), -scale, scale - 1.0);
    const auto iv = static_cast<std::int32_t>(v);
    for (int b = 0; b < block; ++b) {
      out.push_back(static_cast<unsigned char>(static_cast<std::uint32_t>(iv) >> (8 * b)));
    }
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ArgumentError("cannot write " + path);
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
}

}  // namespace mrafx
