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

#ifndef SVKIT_AUGMENT_H_
#define SVKIT_AUGMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace svkit {

struct Utterance {
  std::string id;
  std::string path;
  double duration_seconds = 0.0;
  int sample_rate = 16000;
  std::optional<std::string> speaker;
};

// TSV `utt_id\tpath\tduration\tsample_rate[\tspeaker]`. Ids are unique and
// durations positive.
struct UtteranceManifest {
  std::vector<Utterance> utterances;
};

UtteranceManifest ParseManifest(std::string_view text);
UtteranceManifest ReadManifest(const std::string& path);

enum class Codec { kNone, kGsm };
enum class RateChain { kKeep16k, kDown8k, kDown8kUp16k };

const char* CodecName(Codec codec);
const char* RateChainName(RateChain chain);
// Throws ContractError for an unknown name.
RateChain ParseRateChain(std::string_view name);

inline constexpr double kSpeedFactors[3] = {0.9, 1.0, 1.1};

struct PlanEntry {
  std::string id;
  Codec codec = Codec::kNone;
  RateChain chain = RateChain::kKeep16k;
  double speed = 1.0;

  bool operator==(const PlanEntry&) const = default;
};

// One entry per manifest utterance, in manifest order.
struct AugmentPlan {
  std::vector<PlanEntry> entries;

  size_t CodecCount() const;
  bool operator==(const AugmentPlan&) const = default;
};

// Flags exactly round(fraction * N) utterances: ids are shuffled with the
// seeded generator and the first ones taken.
AugmentPlan AssignCodec(const UtteranceManifest& manifest, double fraction,
                        uint64_t seed);
// Same selection over speakers; every utterance of a chosen speaker is
// flagged. Utterances without a speaker count as their own speaker.
AugmentPlan AssignCodecBySpeaker(const UtteranceManifest& manifest,
                                 double fraction, uint64_t seed);

// Records the chain on every entry. keep16k has no 8 kHz stage, so codec
// flags are cleared for it.
AugmentPlan PlanRateChain(AugmentPlan plan, RateChain mode);

// A single conversion step of a chain.
struct ChainStep {
  enum class Kind { kResample, kCodec } kind;
  int rate = 0;  // target rate for kResample
};
// e.g. down8k-up16k with codec: resample 8000, codec, resample 16000.
std::vector<ChainStep> ChainSteps(const PlanEntry& entry);

// Perturbation off sets every factor to 1.0; on draws uniformly from
// kSpeedFactors per utterance.
AugmentPlan AssignSpeed(AugmentPlan plan, bool perturb, uint64_t seed);

// One sox command line per utterance, in plan order. Throws ContractError
// if plan and manifest ids differ.
std::string EmitCommands(const AugmentPlan& plan,
                         const UtteranceManifest& manifest,
                         const std::string& out_dir);
void WriteCommands(const AugmentPlan& plan, const UtteranceManifest& manifest,
                   const std::string& out_dir, const std::string& path);

// TSV `utt_id\tcodec\tchain\tspeed`.
std::string FormatPlan(const AugmentPlan& plan);
AugmentPlan ParsePlan(std::string_view text);

// POSIX shell quoting; safe strings are returned unchanged.
std::string ShellQuote(const std::string& s);

}  // namespace svkit

#endif  // SVKIT_AUGMENT_H_
