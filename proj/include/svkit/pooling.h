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

#ifndef SVKIT_POOLING_H_
#define SVKIT_POOLING_H_

#include <vector>

#include "svkit/types.h"

namespace svkit {

// Frame-to-utterance aggregation. All operators take T x D frame matrices
// (rows are frames) and are invariant to frame order.

inline constexpr double kStdFloor = 1e-7;

// Concatenated per-channel mean and population std (floored); size 2D.
Vector Tstp(const Matrix& frames);

// Single-head attentive statistics pooling. Frame score is
// tanh(x W) v, normalized by a softmax over frames.
struct AspParams {
  Matrix hidden;  // D x H
  Vector score;   // H
};

Vector Asp(const Matrix& frames, const AspParams& params);
// Softmax attention weights used by Asp, one per frame.
Vector AspWeights(const Matrix& frames, const AspParams& params);

// Diagonal Gaussian prior on the utterance-level latent, log-precision form.
struct XiPrior {
  Vector mean;
  Vector log_precision;
};

struct XiFrameStats {
  Matrix point_estimates;  // T x D
  Matrix log_precisions;   // T x D
};

struct XiPosterior {
  Vector mean;
  Vector log_precision;
};

// Precision-weighted posterior of the frame estimates and the prior; the
// weights are normalized in the log domain.
XiPosterior XiPool(const XiFrameStats& stats, const XiPrior& prior);

// Multi-head factorized attention over a stack of layer outputs.
struct MhfaParams {
  Vector layer_weights_k;  // L
  Vector layer_weights_v;  // L
  Matrix key_proj;         // D x Dk
  Matrix value_proj;       // D x (H * Dv)
  Matrix queries;          // H x Dk
  Matrix out_proj;         // (H * Dv) x E

  int num_heads() const { return static_cast<int>(queries.rows()); }
  int embedding_dim() const { return static_cast<int>(out_proj.cols()); }
  int head_dim() const {
    return num_heads() ? static_cast<int>(value_proj.cols()) / num_heads() : 0;
  }

  // Zero-initialized parameters; head dim defaults to E / H.
  static MhfaParams Zeros(int num_layers, int input_dim, int key_dim,
                          int num_heads = 64, int embedding_dim = 256);
};

// L matrices, each T x D.
using LayerStack = std::vector<Matrix>;

Vector Mhfa(const LayerStack& stack, const MhfaParams& params);

// Per-head attention weights, H x T; each row sums to one.
Matrix MhfaAttention(const LayerStack& stack, const MhfaParams& params);

// Numerically stable softmax of a vector.
Vector Softmax(const Vector& logits);

}  // namespace svkit

#endif  // SVKIT_POOLING_H_
