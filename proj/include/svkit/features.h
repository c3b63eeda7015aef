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

#ifndef SVKIT_FEATURES_H_
#define SVKIT_FEATURES_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "svkit/audio.h"
#include "svkit/embedding_store.h"
#include "svkit/types.h"

namespace svkit {

struct FrameSpec {
  double frame_length_ms = 25.0;
  double frame_shift_ms = 10.0;

  int LengthSamples(int sample_rate) const;
  int ShiftSamples(int sample_rate) const;
  // 1 + floor((n - len) / shift), or 0 when n < len.
  int64_t NumFrames(int64_t num_samples, int sample_rate) const;
};

struct FbankConfig {
  FrameSpec frame;
  int num_mel_bins = 80;
  double preemphasis = 0.97;
  double low_freq = 20.0;
  // Upper band edge in Hz; unset means the Nyquist frequency.
  std::optional<double> high_freq;
  double log_floor = 1e-10;
  // Gaussian dither in units of one 16-bit LSB; 0 disables it.
  double dither = 0.0;
  uint64_t dither_seed = 0;
};

// T x F log-Mel energies.
struct FeatureMatrix {
  Matrix values;
  double frame_shift_ms = 10.0;
  int source_rate = 16000;

  Eigen::Index num_frames() const { return values.rows(); }
  Eigen::Index dim() const { return values.cols(); }
};

double HzToMel(double hz);
double MelToHz(double mel);
// Center frequency in Hz of every triangular filter.
std::vector<double> MelCenterFrequencies(const FbankConfig& config,
                                         int sample_rate);

// Throws ContractError for an invalid config and FormatError when the
// audio is shorter than one frame.
FeatureMatrix LogMelFbank(const AudioBuffer& audio,
                          const FbankConfig& config = {});

struct VadConfig {
  FrameSpec frame;
  double energy_mean_scale = 0.5;
  double energy_threshold = 5.0;
  int context_frames = 5;
  double proportion_threshold = 0.6;
};

using VadMask = std::vector<bool>;

// Natural log of the per-frame energy, computed on int16-scaled samples
// and floored at float epsilon.
std::vector<double> FrameLogEnergies(const AudioBuffer& audio,
                                     const FrameSpec& frame);

// Thresholds log-energies against `energy_threshold + energy_mean_scale *
// mean`, then smooths by the proportion of speech decisions in a window of
// +-context_frames (truncated at the edges).
VadMask VadFromLogEnergies(const std::vector<double>& log_energies,
                           const VadConfig& config);

VadMask EnergyVad(const AudioBuffer& audio, const VadConfig& config = {});

// Keeps the frames where the mask is set. Throws ContractError on a length
// mismatch.
FeatureMatrix ApplyVad(const FeatureMatrix& feats, const VadMask& mask);

// Features as an SVEB set: one record per frame, id = frame index.
EmbeddingSet FeaturesToSet(const FeatureMatrix& feats);
void WriteFeaturesTsv(const FeatureMatrix& feats, const std::string& path);

}  // namespace svkit

#endif  // SVKIT_FEATURES_H_
