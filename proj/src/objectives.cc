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

#include "svkit/objectives.h"

#include <algorithm>
#include <cmath>

#include "io_util.h"
#include "svkit/errors.h"

namespace svkit {

namespace {

struct Normalized {
  Matrix unit;   // rows scaled to unit norm
  Vector norms;  // original row norms
};

Normalized NormalizeRows(const Matrix& m, const char* what) {
  Normalized out{m, m.rowwise().norm()};
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (!(out.norms[i] > 0.0))
      throw ContractError(std::string("zero-norm row in ") + what);
    out.unit.row(i) /= out.norms[i];
  }
  return out;
}

void CheckAamInputs(const Matrix& embeddings, const Matrix& class_weights,
                    const std::vector<int>& labels, const AamConfig& config) {
  SVKIT_REQUIRE(embeddings.rows() >= 1, "aam needs at least one embedding");
  SVKIT_REQUIRE(class_weights.rows() >= 1, "aam needs at least one class");
  SVKIT_REQUIRE(embeddings.cols() == class_weights.cols(),
                "embedding and class weight dims differ");
  SVKIT_REQUIRE(static_cast<Eigen::Index>(labels.size()) == embeddings.rows(),
                "one label per embedding is required");
  for (int y : labels) {
    SVKIT_REQUIRE(y >= 0 && y < class_weights.rows(), "label out of range");
  }
  SVKIT_REQUIRE(config.scale > 0, "aam scale must be positive");
  SVKIT_REQUIRE(config.margin >= 0 && config.margin < M_PI / 2,
                "aam margin must be in [0, pi/2)");
}

// Target-class logit before scaling, and its derivative wrt the cosine.
struct MarginTerm {
  double value;
  double slope;
};

MarginTerm ApplyMargin(double cosine, const AamConfig& config) {
  const double m = config.margin;
  const double c = std::clamp(cosine, -1.0, 1.0);
  const double sine = std::sqrt(std::max(1.0 - c * c, 0.0));
  const double sin_safe = std::max(sine, 1e-12);
  const MarginTerm shifted{c * std::cos(m) - sine * std::sin(m),
                           std::cos(m) + c * std::sin(m) / sin_safe};
  if (config.easy_margin) {
    return c > 0 ? shifted : MarginTerm{c, 1.0};
  }
  // theta + m < pi  <=>  cos(theta) > cos(pi - m)
  if (c > std::cos(M_PI - m)) return shifted;
  return {c - std::sin(m) * m, 1.0};
}

struct Forward {
  Normalized x;
  Normalized w;
  Matrix cosines;
  Matrix logits;
  Matrix probs;
  std::vector<double> target_slope;
  double loss = 0.0;
};

Forward RunForward(const Matrix& embeddings, const Matrix& class_weights,
                   const std::vector<int>& labels, const AamConfig& config) {
  CheckAamInputs(embeddings, class_weights, labels, config);
  Forward f{NormalizeRows(embeddings, "embeddings"),
            NormalizeRows(class_weights, "class weights"), {}, {}, {}, {}, 0.0};
  f.cosines = f.x.unit * f.w.unit.transpose();
  f.logits = config.scale * f.cosines;
  f.target_slope.resize(labels.size());
  const Eigen::Index b = embeddings.rows();
  f.probs.resize(b, class_weights.rows());
  double total = 0.0;
  for (Eigen::Index i = 0; i < b; ++i) {
    const int y = labels[i];
    const MarginTerm t = ApplyMargin(f.cosines(i, y), config);
    f.logits(i, y) = config.scale * t.value;
    f.target_slope[i] = t.slope;
    const double mx = f.logits.row(i).maxCoeff();
    const double lse =
        mx + std::log((f.logits.row(i).array() - mx).exp().sum());
    total += lse - f.logits(i, y);
    f.probs.row(i) = (f.logits.row(i).array() - lse).exp().matrix();
  }
  f.loss = total / static_cast<double>(b);
  return f;
}

}  // namespace

AamOutput AamForward(const Matrix& embeddings, const Matrix& class_weights,
                     const std::vector<int>& labels, const AamConfig& config) {
  Forward f = RunForward(embeddings, class_weights, labels, config);
  return {f.loss, std::move(f.logits)};
}

AamGradients AamGrad(const Matrix& embeddings, const Matrix& class_weights,
                     const std::vector<int>& labels, const AamConfig& config) {
  const Forward f = RunForward(embeddings, class_weights, labels, config);
  const Eigen::Index b = embeddings.rows();

  // dL/dcos
  Matrix g = f.probs;
  for (Eigen::Index i = 0; i < b; ++i) g(i, labels[i]) -= 1.0;
  g *= config.scale / static_cast<double>(b);
  for (Eigen::Index i = 0; i < b; ++i) g(i, labels[i]) *= f.target_slope[i];

  // Back through the row normalization: d(v/|v|) = (I - u u^T) / |v|.
  Matrix dxu = g * f.w.unit;               // B x D
  Matrix dwu = g.transpose() * f.x.unit;   // C x D
  AamGradients out;
  out.loss = f.loss;
  out.d_embeddings.resize(dxu.rows(), dxu.cols());
  for (Eigen::Index i = 0; i < dxu.rows(); ++i) {
    const auto u = f.x.unit.row(i);
    out.d_embeddings.row(i) = (dxu.row(i) - dxu.row(i).dot(u) * u) / f.x.norms[i];
  }
  out.d_class_weights.resize(dwu.rows(), dwu.cols());
  for (Eigen::Index j = 0; j < dwu.rows(); ++j) {
    const auto u = f.w.unit.row(j);
    out.d_class_weights.row(j) =
        (dwu.row(j) - dwu.row(j).dot(u) * u) / f.w.norms[j];
  }
  return out;
}

double MarginAt(double epoch, const MarginSchedule& s, bool lmf) {
  SVKIT_REQUIRE(epoch >= 0, "epoch must be non-negative");
  SVKIT_REQUIRE(s.start_epoch < s.end_epoch, "margin ramp is empty");
  if (lmf) return s.lmf_margin;
  if (epoch <= s.start_epoch) return s.initial;
  if (epoch >= s.end_epoch) return s.final;
  const double frac = (epoch - s.start_epoch) / (s.end_epoch - s.start_epoch);
  return s.initial + frac * (s.final - s.initial);
}

double LrAt(double epoch, const LrSchedule& s) {
  SVKIT_REQUIRE(s.warmup_epochs > 0 && s.warmup_epochs < s.total_epochs,
                "warmup must lie inside the schedule");
  SVKIT_REQUIRE(s.final > 0 && s.final < s.peak,
                "final learning rate must be in (0, peak)");
  if (!(epoch >= 0 && epoch <= s.total_epochs)) {
    throw ContractError("epoch " + internal::FormatG(epoch, 6) +
                        " outside [0, " + internal::FormatG(s.total_epochs, 6) +
                        "]");
  }
  if (epoch <= s.warmup_epochs) return s.peak * (epoch / s.warmup_epochs);
  const double frac =
      (epoch - s.warmup_epochs) / (s.total_epochs - s.warmup_epochs);
  if (frac >= 1.0) return s.final;
  return s.peak * std::pow(s.final / s.peak, frac);
}

std::vector<ScheduleRow> ExpandRecipe(const TrainingRecipe& recipe) {
  std::vector<ScheduleRow> rows;
  const int total = static_cast<int>(std::lround(recipe.lr.total_epochs));
  for (int e = 0; e <= total; ++e) {
    rows.push_back({"main", e, MarginAt(e, recipe.margin),
                    LrAt(e, recipe.lr), recipe.segment_seconds});
  }
  const double lmf_lr = recipe.lmf_lr < 0 ? recipe.lr.final : recipe.lmf_lr;
  for (int e = 1; e <= recipe.lmf_epochs; ++e) {
    rows.push_back({"lmf", e, MarginAt(e, recipe.margin, true), lmf_lr,
                    recipe.lmf_segment_seconds});
  }
  return rows;
}

std::string ScheduleCsv(const std::vector<ScheduleRow>& rows) {
  std::string out = "stage,epoch,margin,lr,segment_s\n";
  for (const auto& r : rows) {
    out += r.stage + ',' + std::to_string(r.epoch) + ',' +
           internal::FormatG(r.margin, 10) + ',' + internal::FormatG(r.lr, 10) +
           ',' + internal::FormatG(r.segment_seconds, 6) + '\n';
  }
  return out;
}

int64_t SecondsToFrames(double seconds, double frame_shift_ms) {
  SVKIT_REQUIRE(seconds > 0 && frame_shift_ms > 0,
                "segment length and frame shift must be positive");
  return static_cast<int64_t>(std::llround(seconds * 1000.0 / frame_shift_ms));
}

Crop CropSegment(int64_t utterance_frames, int64_t target_frames, Rng& rng) {
  SVKIT_REQUIRE(utterance_frames >= 1 && target_frames >= 1,
                "frame counts must be positive");
  Crop crop;
  crop.indices.resize(static_cast<size_t>(target_frames));
  if (utterance_frames >= target_frames) {
    crop.start = static_cast<int64_t>(UniformIndex(
        rng, static_cast<uint64_t>(utterance_frames - target_frames + 1)));
    for (int64_t i = 0; i < target_frames; ++i)
      crop.indices[i] = crop.start + i;
  } else {
    for (int64_t i = 0; i < target_frames; ++i)
      crop.indices[i] = i % utterance_frames;
  }
  return crop;
}

}  // namespace svkit
