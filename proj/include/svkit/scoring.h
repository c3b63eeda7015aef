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

#ifndef SVKIT_SCORING_H_
#define SVKIT_SCORING_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "svkit/embedding_store.h"

namespace svkit {

enum class TrialLabel { kTarget, kNontarget };

struct Trial {
  std::string enroll;
  std::string test;
  std::optional<TrialLabel> label;
};

// Enroll-test pairs. Either every trial is labeled or none is, and no pair
// appears twice.
class TrialList {
 public:
  void Add(Trial trial);

  size_t size() const { return trials_.size(); }
  bool empty() const { return trials_.empty(); }
  bool labeled() const { return labeled_.value_or(false); }
  const std::vector<Trial>& trials() const { return trials_; }
  const Trial& operator[](size_t i) const { return trials_[i]; }

 private:
  std::vector<Trial> trials_;
  std::map<std::pair<std::string, std::string>, size_t> seen_;
  std::optional<bool> labeled_;
};

// `enroll test [target|nontarget]` per line, `#` starts a comment. Parse
// failures carry the line number.
TrialList ParseTrials(std::string_view text);
TrialList ReadTrials(const std::string& path);

struct EnrollmentModel {
  std::string model_id;
  std::vector<std::string> members;
  std::vector<float> vector;  // unit norm
};

// Model vector = normalize(mean(normalize(member))). A zero mean throws
// ContractError.
EnrollmentModel BuildEnrollmentModel(const std::string& model_id,
                                     std::span<const std::vector<float>> segments,
                                     std::vector<std::string> members = {});

// `model_id segment_id` lines mapping models to their enrollment segments.
std::map<std::string, std::vector<std::string>> ReadEnrollmentMap(
    const std::string& path);

// Builds one model per map entry from `segments`. With no map, every
// record becomes a single-segment model of the same id.
std::vector<EnrollmentModel> BuildEnrollment(
    const EmbeddingSet& segments,
    const std::map<std::string, std::vector<std::string>>* model_map = nullptr);

// Models as an embedding set keyed by model id.
EmbeddingSet ModelsToSet(const std::vector<EnrollmentModel>& models);

// a.b / (|a| |b|); zero vectors throw ContractError.
double CosineScore(std::span<const float> a, std::span<const float> b);

struct ScoringOptions {
  int workers = 1;
  // Trials per work unit.
  size_t block_size = 256;
};

// One score per trial in trial order. Every score is computed with a fixed
// summation order, so the output does not depend on `options`.
std::vector<double> ScoreTrials(const EmbeddingSet& models,
                                const EmbeddingSet& tests,
                                const TrialList& trials,
                                const ScoringOptions& options = {});

// `enroll\ttest\tscore` with six decimals.
std::string FormatScores(const TrialList& trials,
                         const std::vector<double>& scores);
void WriteScores(const TrialList& trials, const std::vector<double>& scores,
                 const std::string& path);

struct ScoredTrial {
  std::string enroll;
  std::string test;
  double score = 0.0;
};
std::vector<ScoredTrial> ReadScores(const std::string& path);

}  // namespace svkit

#endif  // SVKIT_SCORING_H_
