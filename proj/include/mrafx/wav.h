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

// Mono RIFF/WAVE files: 16- and 24-bit PCM and 32-bit IEEE float.

#ifndef MRAFX_WAV_H_
#define MRAFX_WAV_H_

#include <span>
#include <string>
#include <vector>

namespace mrafx {

enum class WavFormat { kPcm16, kPcm24, kFloat32 };

struct WavData {
  std::vector<double> samples;  // full scale is [-1, 1)
  double rate_hz = 0.0;
  WavFormat format = WavFormat::kFloat32;
};

// Throws ArgumentError on unreadable, multi-channel or unsupported files.
WavData ReadWav(const std::string& path);

// Integer formats are rounded and clipped to full scale.
void WriteWav(const std::string& path, std::span<const double> samples,
              double rate_hz, WavFormat format = WavFormat::kFloat32);

WavFormat ParseWavFormat(const std::string& name);  // "16", "24", "32f"

}  // namespace mrafx

#endif  // MRAFX_WAV_H_
