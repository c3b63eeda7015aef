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

#ifndef SVKIT_OBJECTIVES_H_
#define SVKIT_OBJECTIVES_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "svkit/random.h"
#include "svkit/types.h"

namespace svkit {

// Additive angular margin softmax.
struct AamConfig {
  double scale = 32.0;
  double margin = 0.2;
  // Apply the margin only where cos(theta) > 0.
  bool easy_margin = false;
};

struct AamOutput {
  double loss = 0.0;
  Matrix logits;  // B x C, already multiplied by the scale
};

struct AamGradients {
  double loss = 0.0;
  Matrix d_embeddings;     // B x D
  Matrix d_class_weights;  // C x D
};

// Rows of both matrices are L2-normalized internally. The target logit is
// cos(theta + m) while theta + m < pi, and cos(theta) - m sin(m) beyond.
// Loss is the batch-mean cross-entropy of the scaled logits.
AamOutput AamForward(const Matrix& embeddings, const Matrix& class_weights,
                     const std::vector<int>& labels, const AamConfig& config);

// Analytic gradient of AamForward's loss.
AamGradients AamGrad(const Matrix& embeddings, const Matrix& class_weights,
                     const std::vector<int>& labels, const AamConfig& config);

struct MarginSchedule {
  double start_epoch = 20.0;
  double end_epoch = 40.0;
  double initial = 0.0;
  double final = 0.2;
  // Fixed margin of the large-margin fine-tuning stage.
  double lmf_margin = 0.5;
};

// Margin before start_epoch is `initial`, ramps linearly to `final` at
// end_epoch and stays there. With `lmf` set the fine-tuning margin is
// returned regardless of epoch.
double MarginAt(double epoch, const MarginSchedule& schedule, bool lmf = false);

struct LrSchedule {
  double warmup_epochs = 6.0;
  double peak = 0.1;
  double final = 5e-5;
  double total_epochs = 150.0;
};

// Linear warmup from 0 to peak, then exponential decay reaching `final` at
// total_epochs. Progress outside [0, total_epochs] throws ContractError.
double LrAt(double epoch, const LrSchedule& schedule);

// Two-stage recipe: main training, then large-margin fine-tuning with
// longer segments and a fixed margin.
struct TrainingRecipe {
  LrSchedule lr;
  MarginSchedule margin;
  double segment_seconds = 2.0;
  int lmf_epochs = 10;
  double lmf_segment_seconds = 10.0;
  // Learning rate held during fine-tuning; negative means lr.final.
  double lmf_lr = -1.0;
};

struct ScheduleRow {
  std::string stage;  // "main" or "lmf"
  int epoch = 0;
  double margin = 0.0;
  double lr = 0.0;
  double segment_seconds = 0.0;
};

// Main-stage rows for epochs 0..total_epochs, then lmf rows 1..lmf_epochs.
std::vector<ScheduleRow> ExpandRecipe(const TrainingRecipe& recipe);
// `stage,epoch,margin,lr,segment_s` with a header line.
std::string ScheduleCsv(const std::vector<ScheduleRow>& rows);

// Segment lengths explored for fine-tuning, in seconds.
inline constexpr std::array<double, 6> kFineTuneSegmentSeconds = {
    2, 3, 6, 10, 20, 40};

int64_t SecondsToFrames(double seconds, double frame_shift_ms = 10.0);

struct Crop {
  int64_t start = 0;
  // Frame indices into the utterance; length equals the target.
  std::vector<int64_t> indices;
};

// Long utterances get a uniformly placed contiguous window; short ones are
// repeated (wrapped) until the target length is reached.
Crop CropSegment(int64_t utterance_frames, int64_t target_frames, Rng& rng);

}  // namespace svkit

#endif  // SVKIT_OBJECTIVES_H_
