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

// Thin FFTW wrappers. Plan creation is serialized internally, so these may
// be called from any thread.

#ifndef MRAFX_FFT_H_
#define MRAFX_FFT_H_

#include <complex>
#include <span>
#include <vector>

namespace mrafx {

// Unnormalized forward real FFT, n/2 + 1 bins.
std::vector<std::complex<double>> Rfft(std::span<const double> x);

// Inverse of Rfft for a length-n signal, including the 1/n factor.
std::vector<double> Irfft(std::span<const std::complex<double>> bins,
                          std::size_t n);

// Unnormalized complex DFT (sign -1 forward, +1 inverse).
std::vector<std::complex<double>> Fft(std::span<const std::complex<double>> x,
                                      bool inverse = false);

}  // namespace mrafx

#endif  // MRAFX_FFT_H_
