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

#ifndef SVKIT_AUDIO_H_
#define SVKIT_AUDIO_H_

#include <string>
#include <vector>

namespace svkit {

// Mono audio, samples nominally in [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 16000;

  double duration_seconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

// RIFF/WAVE, PCM 16-bit mono only. Samples are scaled by 1/32768.
// Unsupported encodings throw FormatError; a file that ends inside a
// declared chunk throws IoError.
AudioBuffer ReadWav(const std::string& path);
AudioBuffer DecodeWav(std::string_view bytes);

// Samples are clipped to the int16 range after scaling by 32768.
void WriteWav(const AudioBuffer& audio, const std::string& path);
std::string EncodeWav(const AudioBuffer& audio);

struct ResamplerConfig {
  // Filter taps per output phase, counted at the lower of the two rates.
  int taps_per_phase = 64;
  // Passband edge as a fraction of the lower Nyquist frequency.
  double rolloff = 0.95;
  double kaiser_beta = 8.6;
};

// Band-limited windowed-sinc resampling with a Kaiser window. Output length
// is round(n * target / source). Samples outside the input are zero.
AudioBuffer Resample(const AudioBuffer& audio, int target_rate,
                     const ResamplerConfig& config = {});

}  // namespace svkit

#endif  // SVKIT_AUDIO_H_
