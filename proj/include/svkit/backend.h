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

#ifndef SVKIT_BACKEND_H_
#define SVKIT_BACKEND_H_

#include <optional>
#include <string>
#include <vector>

#include "svkit/embedding_store.h"
#include "svkit/types.h"

namespace svkit {

struct CenterStage {
  Vector mean;
};

struct LdaStage {
  Matrix projection;  // D x k, unit-norm columns

  Eigen::Index input_dim() const { return projection.rows(); }
  Eigen::Index output_dim() const { return projection.cols(); }
};

// Embedding post-processing. Stages run in the fixed order
// center -> lda -> length_norm; absent stages are skipped.
struct Pipeline {
  std::optional<CenterStage> center;
  std::optional<LdaStage> lda;
  bool length_norm = false;

  bool empty() const { return !center && !lda && !length_norm; }
  // Throws ContractError if stage dimensions do not chain, or if the
  // input dimension is known and differs from `input_dim`.
  void Validate(std::optional<Eigen::Index> input_dim = std::nullopt) const;

  bool operator==(const Pipeline& other) const;
};

CenterStage FitCenter(const EmbeddingSet& set);
CenterStage FitCenter(const Matrix& rows);

// Relative ridge added to the within-class scatter.
inline constexpr double kLdaRidge = 1e-6;

// Top-k generalized eigenvectors of (Sb, Sw + eps I), eps = 1e-6 tr(Sw)/D.
// Requires >= 2 classes and 1 <= k <= n_classes - 1 (k = 0 picks
// min(D, n_classes - 1)). Each column is unit-norm with its first nonzero
// component positive.
LdaStage FitLda(const Matrix& rows, const std::vector<std::string>& labels,
                int k = 0);
// Labels come from the set's label map; unlabeled records are an error.
LdaStage FitLda(const EmbeddingSet& set, int k = 0);

// Within- and between-class scatter, both normalized by the sample count.
struct Scatter {
  Matrix within;
  Matrix between;
  int num_classes = 0;
};
Scatter ComputeScatter(const Matrix& rows,
                       const std::vector<std::string>& labels);

// v / |v|; the zero vector throws ContractError.
Vector LengthNormalize(const Vector& v);

// Row-wise transform in double precision.
Matrix ApplyPipeline(const Pipeline& pipeline, const Matrix& rows);
// Ids, order and labels are preserved.
EmbeddingSet ApplyPipeline(const Pipeline& pipeline, const EmbeddingSet& set);

struct FitOptions {
  bool center = true;
  bool lda = true;
  int lda_dim = 0;
  bool length_norm = true;
};

// Fits the enabled stages in order. Centering statistics come from
// `center_set` when given, otherwise from `train`; LDA is fit on `train`
// after centering.
Pipeline FitPipeline(const EmbeddingSet& train, const FitOptions& options,
                     const EmbeddingSet* center_set = nullptr);

// Tagged binary container:
//   "SVPL" | u16 version=1 | u8 stage_count | stages...
// Stage tags: 1 = center (matrix 1 x D), 2 = lda (matrix D x k),
// 3 = length_norm (no payload). A matrix is u64 rows | u32 cols |
// rows*cols little-endian f64, row-major.
std::string EncodePipeline(const Pipeline& pipeline);
Pipeline DecodePipeline(std::string_view bytes);
void SavePipeline(const Pipeline& pipeline, const std::string& path);
Pipeline LoadPipeline(const std::string& path);

}  // namespace svkit

#endif  // SVKIT_BACKEND_H_
