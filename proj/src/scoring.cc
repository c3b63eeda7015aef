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

#include "svkit/scoring.h"

#include <atomic>
#include <cctype>
#include <cmath>
#include <thread>

#include "io_util.h"
#include "svkit/errors.h"

namespace svkit {

void TrialList::Add(Trial trial) {
  const bool has_label = trial.label.has_value();
  if (labeled_ && *labeled_ != has_label)
    throw FormatError("trial list mixes labeled and unlabeled trials");
  auto key = std::make_pair(trial.enroll, trial.test);
  if (seen_.count(key))
    throw ContractError("duplicate trial " + trial.enroll + " " + trial.test);
  labeled_ = has_label;
  seen_.emplace(std::move(key), trials_.size());
  trials_.push_back(std::move(trial));
}

namespace {

std::optional<TrialLabel> ParseLabel(std::string_view field) {
  std::string lower(field);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "target") return TrialLabel::kTarget;
  if (lower == "nontarget") return TrialLabel::kNontarget;
  return std::nullopt;
}

}  // namespace

TrialList ParseTrials(std::string_view text) {
  TrialList list;
  auto lines = internal::SplitLines(text);
  for (size_t n = 0; n < lines.size(); ++n) {
    std::string_view line = lines[n];
    if (size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    auto fields = internal::SplitFields(line);
    if (fields.empty()) continue;
    if (fields.size() != 2 && fields.size() != 3)
      throw ParseError("expected `enroll test [label]`", n + 1);
    Trial trial{std::string(fields[0]), std::string(fields[1]), std::nullopt};
    if (fields.size() == 3) {
      trial.label = ParseLabel(fields[2]);
      if (!trial.label)
        throw ParseError("bad trial label '" + std::string(fields[2]) + "'",
                         n + 1);
    }
    try {
      list.Add(std::move(trial));
    } catch (const ContractError& e) {
      throw ParseError(e.what(), n + 1);
    } catch (const FormatError& e) {
      throw ParseError(e.what(), n + 1);
    }
  }
  return list;
}

TrialList ReadTrials(const std::string& path) {
  return ParseTrials(internal::ReadFile(path));
}

namespace {

double Norm(std::span<const float> v) {
  double sum = 0.0;
  for (float x : v) sum += static_cast<double>(x) * x;
  return std::sqrt(sum);
}

double Dot(std::span<const float> a, std::span<const float> b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) sum += static_cast<double>(a[i]) * b[i];
  return sum;
}

}  // namespace

EnrollmentModel BuildEnrollmentModel(const std::string& model_id,
                                     std::span<const std::vector<float>> segments,
                                     std::vector<std::string> members) {
  SVKIT_REQUIRE(!segments.empty(), "model " + model_id + " has no segments");
  const size_t dim = segments.front().size();
  std::vector<double> mean(dim, 0.0);
  for (const auto& seg : segments) {
    SVKIT_REQUIRE(seg.size() == dim,
                  "model " + model_id + " has segments of differing dims");
    const double norm = Norm(seg);
    SVKIT_REQUIRE(norm > 0, "model " + model_id + " has a zero segment");
    for (size_t j = 0; j < dim; ++j) mean[j] += seg[j] / norm;
  }
  double norm = 0.0;
  for (double v : mean) norm += v * v;
  norm = std::sqrt(norm);
  // Cancelling members leave a mean at rounding-noise level.
  SVKIT_REQUIRE(norm > 1e-9 * static_cast<double>(segments.size()),
                "model " + model_id + " averages to a zero vector");
  EnrollmentModel model;
  model.model_id = model_id;
  model.members = std::move(members);
  model.vector.resize(dim);
  for (size_t j = 0; j < dim; ++j)
    model.vector[j] = static_cast<float>(mean[j] / norm);
  return model;
}

std::map<std::string, std::vector<std::string>> ReadEnrollmentMap(
    const std::string& path) {
  std::string data = internal::ReadFile(path);
  std::map<std::string, std::vector<std::string>> out;
  auto lines = internal::SplitLines(data);
  for (size_t n = 0; n < lines.size(); ++n) {
    auto fields = internal::SplitFields(lines[n]);
    if (fields.empty() || fields[0].front() == '#') continue;
    if (fields.size() < 2)
      throw ParseError("expected `model segment [segment...]`", n + 1);
    auto& members = out[std::string(fields[0])];
    for (size_t j = 1; j < fields.size(); ++j)
      members.emplace_back(fields[j]);
  }
  return out;
}

std::vector<EnrollmentModel> BuildEnrollment(
    const EmbeddingSet& segments,
    const std::map<std::string, std::vector<std::string>>* model_map) {
  std::vector<EnrollmentModel> models;
  if (!model_map) {
    for (const auto& rec : segments.records()) {
      models.push_back(BuildEnrollmentModel(
          rec.id, std::span<const std::vector<float>>(&rec.vector, 1), {rec.id}));
    }
    return models;
  }
  for (const auto& [model_id, members] : *model_map) {
    std::vector<std::vector<float>> vecs;
    for (const auto& id : members) vecs.push_back(segments.Get(id));
    models.push_back(BuildEnrollmentModel(model_id, vecs, members));
  }
  return models;
}

EmbeddingSet ModelsToSet(const std::vector<EnrollmentModel>& models) {
  EmbeddingSet set(models.empty() ? 0 : models.front().vector.size());
  for (const auto& m : models) set.Add(m.model_id, m.vector);
  return set;
}

double CosineScore(std::span<const float> a, std::span<const float> b) {
  SVKIT_REQUIRE(a.size() == b.size(), "cosine of vectors of differing dims");
  const double na = Norm(a);
  const double nb = Norm(b);
  SVKIT_REQUIRE(na > 0 && nb > 0, "cosine of a zero vector");
  return Dot(a, b) / (na * nb);
}

std::vector<double> ScoreTrials(const EmbeddingSet& models,
                                const EmbeddingSet& tests,
                                const TrialList& trials,
                                const ScoringOptions& options) {
  SVKIT_REQUIRE(options.workers >= 1, "workers must be >= 1");
  SVKIT_REQUIRE(options.block_size >= 1, "block size must be >= 1");
  SVKIT_REQUIRE(trials.empty() || models.dim() == tests.dim(),
                "model and test embeddings differ in dimension");

  // Resolve ids up front so lookup errors surface in trial order.
  const size_t n = trials.size();
  std::vector<size_t> model_idx(n), test_idx(n);
  for (size_t i = 0; i < n; ++i) {
    model_idx[i] = models.IndexOf(trials[i].enroll);
    test_idx[i] = tests.IndexOf(trials[i].test);
  }
  std::vector<double> model_norm(models.size()), test_norm(tests.size());
  for (size_t i = 0; i < models.size(); ++i) model_norm[i] = Norm(models[i].vector);
  for (size_t i = 0; i < tests.size(); ++i) test_norm[i] = Norm(tests[i].vector);
  for (size_t i = 0; i < n; ++i) {
    if (!(model_norm[model_idx[i]] > 0))
      throw ContractError("zero enrollment vector: " + trials[i].enroll);
    if (!(test_norm[test_idx[i]] > 0))
      throw ContractError("zero test vector: " + trials[i].test);
  }

  std::vector<double> scores(n);
  const size_t num_blocks = (n + options.block_size - 1) / options.block_size;
  auto score_block = [&](size_t b) {
    const size_t begin = b * options.block_size;
    const size_t end = std::min(n, begin + options.block_size);
    for (size_t i = begin; i < end; ++i) {
      const auto& a = models[model_idx[i]].vector;
      const auto& t = tests[test_idx[i]].vector;
      scores[i] = Dot(a, t) / (model_norm[model_idx[i]] * test_norm[test_idx[i]]);
    }
  };

  const size_t workers =
      std::min<size_t>(static_cast<size_t>(options.workers), num_blocks);
  if (workers <= 1) {
    for (size_t b = 0; b < num_blocks; ++b) score_block(b);
    return scores;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t b = next++; b < num_blocks; b = next++) score_block(b);
    });
  }
  for (auto& th : pool) th.join();
  return scores;
}

std::string FormatScores(const TrialList& trials,
                         const std::vector<double>& scores) {
  SVKIT_REQUIRE(trials.size() == scores.size(), "one score per trial required");
  std::string out;
  for (size_t i = 0; i < scores.size(); ++i) {
    out += trials[i].enroll + '\t' + trials[i].test + '\t' +
           internal::FormatFixed(scores[i], 6) + '\n';
  }
  return out;
}

void WriteScores(const TrialList& trials, const std::vector<double>& scores,
                 const std::string& path) {
  internal::WriteFile(path, FormatScores(trials, scores));
}

std::vector<ScoredTrial> ReadScores(const std::string& path) {
  std::string data = internal::ReadFile(path);
  std::vector<ScoredTrial> out;
  auto lines = internal::SplitLines(data);
  for (size_t n = 0; n < lines.size(); ++n) {
    auto fields = internal::SplitFields(lines[n]);
    if (fields.empty() || fields[0].front() == '#') continue;
    if (fields.size() != 3)
      throw ParseError("expected `enroll test score`", n + 1);
    ScoredTrial s{std::string(fields[0]), std::string(fields[1]), 0.0};
    if (!internal::ParseDouble(fields[2], &s.score) || !std::isfinite(s.score))
      throw ParseError("bad score '" + std::string(fields[2]) + "'", n + 1);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace svkit
