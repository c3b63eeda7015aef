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

#include "svkit/backend.h"

#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>

#include "io_util.h"
#include "svkit/errors.h"

namespace svkit {

void Pipeline::Validate(std::optional<Eigen::Index> input_dim) const {
  std::optional<Eigen::Index> dim = input_dim;
  if (center) {
    if (dim && center->mean.size() != *dim) {
      throw ContractError("center stage expects dim " +
                          std::to_string(center->mean.size()) + ", got " +
                          std::to_string(*dim));
    }
    dim = center->mean.size();
  }
  if (lda) {
    SVKIT_REQUIRE(lda->output_dim() >= 1, "lda stage has no output dims");
    if (dim && lda->input_dim() != *dim) {
      throw ContractError("lda stage expects dim " +
                          std::to_string(lda->input_dim()) + ", got " +
                          std::to_string(*dim));
    }
  }
}

bool Pipeline::operator==(const Pipeline& other) const {
  if (length_norm != other.length_norm) return false;
  if (center.has_value() != other.center.has_value()) return false;
  if (lda.has_value() != other.lda.has_value()) return false;
  if (center && (center->mean.size() != other.center->mean.size() ||
                 center->mean != other.center->mean))
    return false;
  if (lda && (lda->projection.rows() != other.lda->projection.rows() ||
              lda->projection.cols() != other.lda->projection.cols() ||
              lda->projection != other.lda->projection))
    return false;
  return true;
}

CenterStage FitCenter(const Matrix& rows) {
  SVKIT_REQUIRE(rows.rows() >= 1, "cannot center an empty set");
  return {rows.colwise().mean().transpose()};
}

CenterStage FitCenter(const EmbeddingSet& set) {
  return FitCenter(set.ToMatrix());
}

Scatter ComputeScatter(const Matrix& rows,
                       const std::vector<std::string>& labels) {
  SVKIT_REQUIRE(static_cast<Eigen::Index>(labels.size()) == rows.rows(),
                "one label per row is required");
  const Eigen::Index d = rows.cols();
  std::map<std::string, std::vector<Eigen::Index>> members;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) members[labels[i]].push_back(i);

  const double n = static_cast<double>(rows.rows());
  const Vector global = rows.colwise().mean().transpose();
  Scatter s;
  s.within = Matrix::Zero(d, d);
  s.between = Matrix::Zero(d, d);
  s.num_classes = static_cast<int>(members.size());
  for (const auto& [label, idx] : members) {
    Vector mean = Vector::Zero(d);
    for (Eigen::Index i : idx) mean += rows.row(i).transpose();
    mean /= static_cast<double>(idx.size());
    for (Eigen::Index i : idx) {
      const Vector dev = rows.row(i).transpose() - mean;
      s.within.noalias() += dev * dev.transpose();
    }
    const Vector off = mean - global;
    s.between.noalias() += static_cast<double>(idx.size()) * off * off.transpose();
  }
  s.within /= n;
  s.between /= n;
  return s;
}

LdaStage FitLda(const Matrix& rows, const std::vector<std::string>& labels,
                int k) {
  const Scatter s = ComputeScatter(rows, labels);
  const Eigen::Index d = rows.cols();
  SVKIT_REQUIRE(s.num_classes >= 2, "lda needs at least two classes");
  const int max_k = static_cast<int>(std::min<Eigen::Index>(d, s.num_classes - 1));
  if (k == 0) k = max_k;
  if (k < 1 || k > max_k) {
    throw ContractError("lda dimension " + std::to_string(k) +
                        " outside [1, " + std::to_string(max_k) + "]");
  }

  double eps = kLdaRidge * s.within.trace() / static_cast<double>(d);
  // A within-class scatter of exactly zero leaves nothing to scale against.
  if (!(eps > 0)) eps = kLdaRidge * s.between.trace() / static_cast<double>(d);
  if (!(eps > 0)) eps = kLdaRidge;
  Eigen::MatrixXd a = s.between;
  Eigen::MatrixXd b = s.within;
  b.diagonal().array() += eps;

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      a, b, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success)
    throw ContractError("lda generalized eigensolve failed");

  LdaStage stage;
  stage.projection.resize(d, k);
  for (int c = 0; c < k; ++c) {
    // Eigenvalues are ascending.
    Vector v = solver.eigenvectors().col(d - 1 - c);
    v.normalize();
    const double tol = 1e-12;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (std::abs(v[j]) > tol) {
        if (v[j] < 0) v = -v;
        break;
      }
    }
    stage.projection.col(c) = v;
  }
  return stage;
}

LdaStage FitLda(const EmbeddingSet& set, int k) {
  std::vector<std::string> labels;
  labels.reserve(set.size());
  for (const auto& rec : set.records()) {
    auto label = set.LabelOf(rec.id);
    if (!label) throw ContractError("no speaker label for " + rec.id);
    labels.push_back(*label);
  }
  return FitLda(set.ToMatrix(), labels, k);
}

Vector LengthNormalize(const Vector& v) {
  const double norm = v.norm();
  SVKIT_REQUIRE(norm > 0, "cannot length-normalize a zero vector");
  return v / norm;
}

Matrix ApplyPipeline(const Pipeline& pipeline, const Matrix& rows) {
  pipeline.Validate(rows.cols());
  Matrix out = rows;
  if (pipeline.center) out.rowwise() -= pipeline.center->mean.transpose();
  if (pipeline.lda) out = out * pipeline.lda->projection;
  if (pipeline.length_norm) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      const double norm = out.row(i).norm();
      SVKIT_REQUIRE(norm > 0, "cannot length-normalize a zero vector (row " +
                                  std::to_string(i) + ")");
      out.row(i) /= norm;
    }
  }
  return out;
}

EmbeddingSet ApplyPipeline(const Pipeline& pipeline, const EmbeddingSet& set) {
  if (set.empty()) {
    pipeline.Validate(static_cast<Eigen::Index>(set.dim()));
    size_t dim = set.dim();
    if (pipeline.lda) dim = static_cast<size_t>(pipeline.lda->output_dim());
    return EmbeddingSet(dim);
  }
  const Matrix out = ApplyPipeline(pipeline, set.ToMatrix());
  std::vector<std::string> ids;
  ids.reserve(set.size());
  for (const auto& rec : set.records()) ids.push_back(rec.id);
  EmbeddingSet result = FromMatrix(out, ids);
  for (const auto& [id, label] : set.labels()) result.SetLabel(id, label);
  return result;
}

Pipeline FitPipeline(const EmbeddingSet& train, const FitOptions& options,
                     const EmbeddingSet* center_set) {
  Pipeline p;
  Matrix rows = train.ToMatrix();
  if (options.center) {
    const EmbeddingSet& source = center_set ? *center_set : train;
    SVKIT_REQUIRE(source.dim() == train.dim(),
                  "centering set dimension differs from training set");
    p.center = FitCenter(source);
    rows.rowwise() -= p.center->mean.transpose();
  }
  if (options.lda) {
    std::vector<std::string> labels;
    for (const auto& rec : train.records()) {
      auto label = train.LabelOf(rec.id);
      if (!label) throw ContractError("no speaker label for " + rec.id);
      labels.push_back(*label);
    }
    p.lda = FitLda(rows, labels, options.lda_dim);
  }
  p.length_norm = options.length_norm;
  return p;
}

namespace {

constexpr char kPipelineMagic[4] = {'S', 'V', 'P', 'L'};
constexpr uint16_t kPipelineVersion = 1;
enum StageTag : uint8_t { kTagCenter = 1, kTagLda = 2, kTagLengthNorm = 3 };

void PutMatrix(internal::ByteWriter* w, const Matrix& m) {
  w->Put<uint64_t>(static_cast<uint64_t>(m.rows()));
  w->Put<uint32_t>(static_cast<uint32_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) w->Put<double>(m(i, j));
}

Matrix GetMatrix(internal::ByteReader* r) {
  const uint64_t rows = r->Get<uint64_t>("matrix rows");
  const uint32_t cols = r->Get<uint32_t>("matrix cols");
  if (cols != 0 && rows > r->remaining() / (8ull * cols))
    throw FormatError("matrix size exceeds file size");
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (uint64_t i = 0; i < rows; ++i)
    for (uint32_t j = 0; j < cols; ++j) {
      const double v = r->Get<double>("matrix value");
      if (!std::isfinite(v)) throw FormatError("non-finite pipeline parameter");
      m(static_cast<Eigen::Index>(i), j) = v;
    }
  return m;
}

}  // namespace

std::string EncodePipeline(const Pipeline& pipeline) {
  pipeline.Validate();
  internal::ByteWriter w;
  w.PutBytes(std::string_view(kPipelineMagic, 4));
  w.Put<uint16_t>(kPipelineVersion);
  const uint8_t count = (pipeline.center ? 1 : 0) + (pipeline.lda ? 1 : 0) +
                        (pipeline.length_norm ? 1 : 0);
  w.Put<uint8_t>(count);
  if (pipeline.center) {
    w.Put<uint8_t>(kTagCenter);
    PutMatrix(&w, pipeline.center->mean.transpose());
  }
  if (pipeline.lda) {
    w.Put<uint8_t>(kTagLda);
    PutMatrix(&w, pipeline.lda->projection);
  }
  if (pipeline.length_norm) w.Put<uint8_t>(kTagLengthNorm);
  return w.Take();
}

Pipeline DecodePipeline(std::string_view bytes) {
  internal::ByteReader r(bytes);
  if (r.GetBytes(4, "magic") != std::string_view(kPipelineMagic, 4))
    throw FormatError("bad pipeline magic");
  const uint16_t version = r.Get<uint16_t>("version");
  if (version != kPipelineVersion)
    throw FormatError("unsupported pipeline version " + std::to_string(version));
  const uint8_t count = r.Get<uint8_t>("stage count");
  Pipeline p;
  int last_tag = 0;
  for (uint8_t s = 0; s < count; ++s) {
    const uint8_t tag = r.Get<uint8_t>("stage tag");
    if (tag <= last_tag) throw FormatError("pipeline stages out of order");
    last_tag = tag;
    switch (tag) {
      case kTagCenter: {
        Matrix m = GetMatrix(&r);
        if (m.rows() != 1) throw FormatError("center stage must be 1 x D");
        p.center = CenterStage{m.row(0).transpose()};
        break;
      }
      case kTagLda:
        p.lda = LdaStage{GetMatrix(&r)};
        break;
      case kTagLengthNorm:
        p.length_norm = true;
        break;
      default:
        throw FormatError("unknown pipeline stage tag " + std::to_string(tag));
    }
  }
  if (r.remaining() != 0) throw FormatError("trailing bytes after pipeline");
  try {
    p.Validate();
  } catch (const ContractError& e) {
    throw FormatError(std::string("inconsistent pipeline file: ") + e.what());
  }
  return p;
}

void SavePipeline(const Pipeline& pipeline, const std::string& path) {
  internal::WriteFile(path, EncodePipeline(pipeline));
}

Pipeline LoadPipeline(const std::string& path) {
  return DecodePipeline(internal::ReadFile(path));
}

}  // namespace svkit
