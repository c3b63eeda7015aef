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

#ifndef SVKIT_SRC_FFT_H_
#define SVKIT_SRC_FFT_H_

#include <complex>
#include <vector>

namespace svkit::internal {

// In-place iterative radix-2 FFT. Size must be a power of two.
class Fft {
 public:
  explicit Fft(size_t size);

  size_t size() const { return size_; }
  void Forward(std::vector<std::complex<double>>* data) const;

  // |X_k|^2 for k = 0..size/2 of a real frame zero-padded to size().
  void PowerSpectrum(const std::vector<double>& frame,
                     std::vector<double>* power) const;

 private:
  size_t size_;
  std::vector<size_t> bit_reverse_;
  std::vector<std::complex<double>> twiddles_;
};

size_t NextPowerOfTwo(size_t n);

}  // namespace svkit::internal

#endif  // SVKIT_SRC_FFT_H_
