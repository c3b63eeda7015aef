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

#ifndef SVKIT_RANDOM_H_
#define SVKIT_RANDOM_H_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace svkit {

// Seeded generator used by every randomized operation. The standard
// distributions are implementation-defined, so draws go through the helpers
// below to stay identical across standard libraries.
using Rng = std::mt19937_64;

// Uniform integer in [0, n). n must be positive.
inline uint64_t UniformIndex(Rng& rng, uint64_t n) {
  // 2^64 mod n; draws above max - rem would bias the modulo.
  const uint64_t rem = (Rng::max() % n + 1) % n;
  while (true) {
    const uint64_t x = rng();
    if (x <= Rng::max() - rem) return x % n;
  }
}

// Uniform double in [lo, hi) from the top 53 bits of one draw.
inline double UniformReal(Rng& rng, double lo = 0.0, double hi = 1.0) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

// Fisher-Yates shuffle driven by UniformIndex.
template <typename T>
void Shuffle(std::vector<T>* items, Rng& rng) {
  for (size_t i = items->size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(UniformIndex(rng, i));
    std::swap((*items)[i - 1], (*items)[j]);
  }
}

}  // namespace svkit

#endif  // SVKIT_RANDOM_H_
