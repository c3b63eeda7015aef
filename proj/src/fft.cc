// Copyright (c) 2026 The svkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fft.h"

#include <cmath>

#include "svkit/errors.h"

namespace svkit::internal {

size_t NextPowerOfTwo(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

Fft::Fft(size_t size) : size_(size) {
  SVKIT_REQUIRE(size >= 1 && (size & (size - 1)) == 0,
                "FFT size must be a power of two");
  bit_reverse_.resize(size);
  size_t bits = 0;
  while ((size_t{1} << bits) < size) ++bits;
  for (size_t i = 0; i < size; ++i) {
    size_t r = 0;
    for (size_t b = 0; b < bits; ++b)
      if (i & (size_t{1} << b)) r |= size_t{1} << (bits - 1 - b);
    bit_reverse_[i] = r;
  }
  twiddles_.resize(size / 2);
  for (size_t k = 0; k < size / 2; ++k) {
    double angle = -2.0 * M_PI * static_cast<double>(k) / size;
    twiddles_[k] = {std::cos(angle), std::sin(angle)};
  }
}

void Fft::Forward(std::vector<std::complex<double>>* data) const {
  auto& x = *data;
  SVKIT_REQUIRE(x.size() == size_, "FFT input size mismatch");
  for (size_t i = 0; i < size_; ++i)
    if (i < bit_reverse_[i]) std::swap(x[i], x[bit_reverse_[i]]);
  for (size_t len = 2; len <= size_; len <<= 1) {
    const size_t half = len / 2;
    const size_t step = size_ / len;
    for (size_t start = 0; start < size_; start += len) {
      for (size_t k = 0; k < half; ++k) {
        std::complex<double> t = twiddles_[k * step] * x[start + k + half];
        x[start + k + half] = x[start + k] - t;
        x[start + k] += t;
      }
    }
  }
}

void Fft::PowerSpectrum(const std::vector<double>& frame,
                        std::vector<double>* power) const {
  SVKIT_REQUIRE(frame.size() <= size_, "frame longer than FFT size");
  std::vector<std::complex<double>> buf(size_);
  for (size_t i = 0; i < frame.size(); ++i) buf[i] = frame[i];
  Forward(&buf);
  power->resize(size_ / 2 + 1);
  for (size_t k = 0; k <= size_ / 2; ++k) (*power)[k] = std::norm(buf[k]);
}

}  // namespace svkit::internal
