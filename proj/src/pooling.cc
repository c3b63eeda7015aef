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

#include "svkit/pooling.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "svkit/errors.h"

namespace svkit {

Vector Softmax(const Vector& logits) {
  SVKIT_REQUIRE(logits.size() > 0, "softmax of an empty vector");
  const double m = logits.maxCoeff();
  Vector e = (logits.array() - m).exp().matrix();
  return e / e.sum();
}

namespace {

Vector WeightedStats(const Matrix& frames, const Vector& weights) {
  const Eigen::Index d = frames.cols();
  Vector mean = frames.transpose() * weights;
  Vector second = frames.array().square().matrix().transpose() * weights;
  Vector out(2 * d);
  out.head(d) = mean;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double var = std::max(second[j] - mean[j] * mean[j], 0.0);
    out[d + j] = std::max(std::sqrt(var), kStdFloor);
  }
  return out;
}

}  // namespace

Vector Tstp(const Matrix& frames) {
  SVKIT_REQUIRE(frames.rows() >= 1, "tstp needs at least one frame");
  const Eigen::Index t = frames.rows();
  const Eigen::Index d = frames.cols();
  Vector mean = frames.colwise().mean().transpose();
  Vector out(2 * d);
  out.head(d) = mean;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double var =
        (frames.col(j).array() - mean[j]).square().sum() / static_cast<double>(t);
    out[d + j] = std::max(std::sqrt(var), kStdFloor);
  }
  return out;
}

Vector AspWeights(const Matrix& frames, const AspParams& params) {
  SVKIT_REQUIRE(frames.rows() >= 1, "asp needs at least one frame");
  SVKIT_REQUIRE(params.hidden.rows() == frames.cols(),
                "asp hidden projection rows must equal frame dim");
  SVKIT_REQUIRE(params.score.size() == params.hidden.cols(),
                "asp score projection size must equal hidden dim");
  Matrix hidden = (frames * params.hidden).array().tanh().matrix();
  return Softmax(hidden * params.score);
}

Vector Asp(const Matrix& frames, const AspParams& params) {
  return WeightedStats(frames, AspWeights(frames, params));
}

XiPosterior XiPool(const XiFrameStats& stats, const XiPrior& prior) {
  const Eigen::Index t = stats.point_estimates.rows();
  const Eigen::Index d = stats.point_estimates.cols();
  SVKIT_REQUIRE(stats.log_precisions.rows() == t &&
                    stats.log_precisions.cols() == d,
                "xi frame estimates and precisions differ in shape");
  SVKIT_REQUIRE(prior.mean.size() == d && prior.log_precision.size() == d,
                "xi prior dimension does not match frames");
  XiPosterior post;
  post.mean.resize(d);
  post.log_precision.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    double m = prior.log_precision[j];
    for (Eigen::Index i = 0; i < t; ++i)
      m = std::max(m, stats.log_precisions(i, j));
    double denom = std::exp(prior.log_precision[j] - m);
    for (Eigen::Index i = 0; i < t; ++i)
      denom += std::exp(stats.log_precisions(i, j) - m);
    const double lse = m + std::log(denom);
    double mean = std::exp(prior.log_precision[j] - lse) * prior.mean[j];
    for (Eigen::Index i = 0; i < t; ++i)
      mean += std::exp(stats.log_precisions(i, j) - lse) *
              stats.point_estimates(i, j);
    post.mean[j] = mean;
    post.log_precision[j] = lse;
  }
  return post;
}

MhfaParams MhfaParams::Zeros(int num_layers, int input_dim, int key_dim,
                             int num_heads, int embedding_dim) {
  SVKIT_REQUIRE(num_layers >= 1 && input_dim >= 1 && key_dim >= 1 &&
                    num_heads >= 1 && embedding_dim >= 1,
                "mhfa sizes must be positive");
  SVKIT_REQUIRE(embedding_dim % num_heads == 0,
                "embedding dim must be divisible by the head count");
  const int head_dim = embedding_dim / num_heads;
  MhfaParams p;
  p.layer_weights_k = Vector::Zero(num_layers);
  p.layer_weights_v = Vector::Zero(num_layers);
  p.key_proj = Matrix::Zero(input_dim, key_dim);
  p.value_proj = Matrix::Zero(input_dim, num_heads * head_dim);
  p.queries = Matrix::Zero(num_heads, key_dim);
  p.out_proj = Matrix::Zero(num_heads * head_dim, embedding_dim);
  return p;
}

namespace {

void CheckMhfa(const LayerStack& stack, const MhfaParams& p) {
  SVKIT_REQUIRE(!stack.empty(), "mhfa needs at least one layer");
  const Eigen::Index l = static_cast<Eigen::Index>(stack.size());
  const Eigen::Index t = stack[0].rows();
  const Eigen::Index d = stack[0].cols();
  SVKIT_REQUIRE(t >= 1, "mhfa needs at least one frame");
  for (const Matrix& layer : stack) {
    SVKIT_REQUIRE(layer.rows() == t && layer.cols() == d,
                  "mhfa layers differ in shape");
  }
  SVKIT_REQUIRE(p.layer_weights_k.size() == l && p.layer_weights_v.size() == l,
                "mhfa layer weight count does not match the stack depth");
  SVKIT_REQUIRE(p.key_proj.rows() == d && p.value_proj.rows() == d,
                "mhfa projections do not match the frame dim");
  SVKIT_REQUIRE(p.queries.cols() == p.key_proj.cols(),
                "mhfa query dim does not match the key dim");
  SVKIT_REQUIRE(p.num_heads() >= 1 && p.value_proj.cols() % p.num_heads() == 0,
                "mhfa value dim must split evenly across heads");
  SVKIT_REQUIRE(p.out_proj.rows() == p.value_proj.cols(),
                "mhfa output projection does not match the value dim");
}

Matrix MixLayers(const LayerStack& stack, const Vector& layer_logits) {
  const Vector w = Softmax(layer_logits);
  Matrix mixed = w[0] * stack[0];
  for (size_t l = 1; l < stack.size(); ++l)
    mixed += w[static_cast<Eigen::Index>(l)] * stack[l];
  return mixed;
}

}  // namespace

Matrix MhfaAttention(const LayerStack& stack, const MhfaParams& params) {
  CheckMhfa(stack, params);
  const Matrix keys = MixLayers(stack, params.layer_weights_k) * params.key_proj;
  // H x T logits.
  const Matrix logits = params.queries * keys.transpose();
  Matrix attn(logits.rows(), logits.cols());
  for (Eigen::Index h = 0; h < logits.rows(); ++h)
    attn.row(h) = Softmax(logits.row(h).transpose()).transpose();
  return attn;
}

Vector Mhfa(const LayerStack& stack, const MhfaParams& params) {
  const Matrix attn = MhfaAttention(stack, params);
  const Matrix values =
      MixLayers(stack, params.layer_weights_v) * params.value_proj;
  const int heads = params.num_heads();
  const int hd = params.head_dim();
  Vector context(static_cast<Eigen::Index>(heads) * hd);
  for (int h = 0; h < heads; ++h) {
    context.segment(static_cast<Eigen::Index>(h) * hd, hd) =
        values.middleCols(static_cast<Eigen::Index>(h) * hd, hd).transpose() *
        attn.row(h).transpose();
  }
  return params.out_proj.transpose() * context;
}

}  // namespace svkit
