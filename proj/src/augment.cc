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

#include "svkit/augment.h"

#include <cmath>
#include <map>
#include <set>

#include "io_util.h"
#include "svkit/errors.h"
#include "svkit/random.h"

namespace svkit {

UtteranceManifest ParseManifest(std::string_view text) {
  UtteranceManifest manifest;
  std::set<std::string> seen;
  auto lines = internal::SplitLines(text);
  for (size_t n = 0; n < lines.size(); ++n) {
    auto fields = internal::SplitFields(lines[n]);
    if (fields.empty() || fields[0].front() == '#') continue;
    if (fields.size() != 4 && fields.size() != 5)
      throw ParseError("expected `id path duration rate [speaker]`", n + 1);
    Utterance utt;
    utt.id = std::string(fields[0]);
    utt.path = std::string(fields[1]);
    long long rate = 0;
    if (!internal::ParseDouble(fields[2], &utt.duration_seconds) ||
        !(utt.duration_seconds > 0) || !std::isfinite(utt.duration_seconds))
      throw ParseError("duration must be a positive number", n + 1);
    if (!internal::ParseInt(fields[3], &rate) || rate <= 0)
      throw ParseError("sample rate must be a positive integer", n + 1);
    utt.sample_rate = static_cast<int>(rate);
    if (fields.size() == 5) utt.speaker = std::string(fields[4]);
    if (!seen.insert(utt.id).second)
      throw ParseError("duplicate utterance id " + utt.id, n + 1);
    manifest.utterances.push_back(std::move(utt));
  }
  return manifest;
}

UtteranceManifest ReadManifest(const std::string& path) {
  return ParseManifest(internal::ReadFile(path));
}

const char* CodecName(Codec codec) {
  return codec == Codec::kGsm ? "gsm" : "none";
}

const char* RateChainName(RateChain chain) {
  switch (chain) {
    case RateChain::kKeep16k:
      return "keep16k";
    case RateChain::kDown8k:
      return "down8k";
    case RateChain::kDown8kUp16k:
      return "down8k-up16k";
  }
  return "?";
}

RateChain ParseRateChain(std::string_view name) {
  if (name == "keep16k") return RateChain::kKeep16k;
  if (name == "down8k") return RateChain::kDown8k;
  if (name == "down8k-up16k") return RateChain::kDown8kUp16k;
  throw ContractError("unknown rate chain '" + std::string(name) + "'");
}

size_t AugmentPlan::CodecCount() const {
  size_t n = 0;
  for (const auto& e : entries) n += e.codec == Codec::kGsm ? 1 : 0;
  return n;
}

namespace {

AugmentPlan EmptyPlan(const UtteranceManifest& manifest) {
  AugmentPlan plan;
  plan.entries.reserve(manifest.utterances.size());
  for (const auto& utt : manifest.utterances) plan.entries.push_back({utt.id});
  return plan;
}

size_t SelectionCount(double fraction, size_t n) {
  SVKIT_REQUIRE(fraction >= 0 && fraction <= 1, "fraction must be in [0, 1]");
  return static_cast<size_t>(std::llround(fraction * static_cast<double>(n)));
}

}  // namespace

AugmentPlan AssignCodec(const UtteranceManifest& manifest, double fraction,
                        uint64_t seed) {
  AugmentPlan plan = EmptyPlan(manifest);
  const size_t take = SelectionCount(fraction, plan.entries.size());
  std::vector<size_t> order(plan.entries.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  Shuffle(&order, rng);
  for (size_t i = 0; i < take; ++i) plan.entries[order[i]].codec = Codec::kGsm;
  return plan;
}

AugmentPlan AssignCodecBySpeaker(const UtteranceManifest& manifest,
                                 double fraction, uint64_t seed) {
  AugmentPlan plan = EmptyPlan(manifest);
  // Speakers in order of first appearance.
  std::vector<std::string> speakers;
  std::map<std::string, std::vector<size_t>> members;
  for (size_t i = 0; i < manifest.utterances.size(); ++i) {
    const auto& utt = manifest.utterances[i];
    const std::string key = utt.speaker ? "s:" + *utt.speaker : "u:" + utt.id;
    auto [it, inserted] = members.try_emplace(key);
    if (inserted) speakers.push_back(key);
    it->second.push_back(i);
  }
  const size_t take = SelectionCount(fraction, speakers.size());
  Rng rng(seed);
  Shuffle(&speakers, rng);
  for (size_t s = 0; s < take; ++s)
    for (size_t i : members[speakers[s]]) plan.entries[i].codec = Codec::kGsm;
  return plan;
}

AugmentPlan PlanRateChain(AugmentPlan plan, RateChain mode) {
  for (auto& e : plan.entries) {
    e.chain = mode;
    if (mode == RateChain::kKeep16k) e.codec = Codec::kNone;
  }
  return plan;
}

std::vector<ChainStep> ChainSteps(const PlanEntry& entry) {
  using Kind = ChainStep::Kind;
  std::vector<ChainStep> steps;
  if (entry.chain == RateChain::kKeep16k) return steps;
  steps.push_back({Kind::kResample, 8000});
  if (entry.codec == Codec::kGsm) steps.push_back({Kind::kCodec, 0});
  if (entry.chain == RateChain::kDown8kUp16k)
    steps.push_back({Kind::kResample, 16000});
  return steps;
}

AugmentPlan AssignSpeed(AugmentPlan plan, bool perturb, uint64_t seed) {
  Rng rng(seed);
  for (auto& e : plan.entries)
    e.speed = perturb ? kSpeedFactors[UniformIndex(rng, 3)] : 1.0;
  return plan;
}

std::string ShellQuote(const std::string& s) {
  static const std::string kSafe =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
      "_@%+=:,./-";
  if (!s.empty() && s.find_first_not_of(kSafe) == std::string::npos) return s;
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  out += '\'';
  return out;
}

namespace {

std::string CommandFor(const PlanEntry& e, const Utterance& utt,
                       const std::string& out_dir) {
  const std::string base = out_dir.empty() ? e.id : out_dir + "/" + e.id;
  const std::string src = ShellQuote(utt.path);
  const std::string dst = ShellQuote(base + ".wav");
  const std::string speed =
      e.speed == 1.0 ? "" : " speed " + internal::FormatG(e.speed, 6);

  if (e.chain == RateChain::kKeep16k) return "sox " + src + " " + dst + speed;

  const bool up = e.chain == RateChain::kDown8kUp16k;
  const std::string up_opt = up ? " -r 16000" : "";
  if (e.codec == Codec::kGsm) {
    const std::string gsm = ShellQuote(base + ".gsm");
    return "sox " + src + " -r 8000 -t gsm " + gsm + speed + " && sox " + gsm +
           " -t wav -e signed -b 16" + up_opt + " " + dst;
  }
  if (!up) return "sox " + src + " -r 8000 " + dst + speed;
  const std::string mid = ShellQuote(base + ".8k.wav");
  return "sox " + src + " -r 8000 " + mid + speed + " && sox " + mid +
         " -r 16000 " + dst;
}

}  // namespace

std::string EmitCommands(const AugmentPlan& plan,
                         const UtteranceManifest& manifest,
                         const std::string& out_dir) {
  SVKIT_REQUIRE(plan.entries.size() == manifest.utterances.size(),
                "plan and manifest cover different utterance counts");
  std::map<std::string, const Utterance*> by_id;
  for (const auto& utt : manifest.utterances) by_id[utt.id] = &utt;
  std::set<std::string> covered;
  std::string out;
  for (const auto& e : plan.entries) {
    auto it = by_id.find(e.id);
    if (it == by_id.end())
      throw ContractError("plan id not in manifest: " + e.id);
    if (!covered.insert(e.id).second)
      throw ContractError("plan covers " + e.id + " twice");
    out += CommandFor(e, *it->second, out_dir);
    out += '\n';
  }
  return out;
}

void WriteCommands(const AugmentPlan& plan, const UtteranceManifest& manifest,
                   const std::string& out_dir, const std::string& path) {
  internal::WriteFile(path, EmitCommands(plan, manifest, out_dir));
}

std::string FormatPlan(const AugmentPlan& plan) {
  std::string out;
  for (const auto& e : plan.entries) {
    out += e.id + '\t' + CodecName(e.codec) + '\t' + RateChainName(e.chain) +
           '\t' + internal::FormatFixed(e.speed, 1) + '\n';
  }
  return out;
}

AugmentPlan ParsePlan(std::string_view text) {
  AugmentPlan plan;
  std::set<std::string> seen;
  auto lines = internal::SplitLines(text);
  for (size_t n = 0; n < lines.size(); ++n) {
    auto fields = internal::SplitFields(lines[n]);
    if (fields.empty()) continue;
    if (fields.size() != 4)
      throw ParseError("expected `id codec chain speed`", n + 1);
    PlanEntry e{std::string(fields[0])};
    if (fields[1] == "gsm")
      e.codec = Codec::kGsm;
    else if (fields[1] != "none")
      throw ParseError("bad codec '" + std::string(fields[1]) + "'", n + 1);
    try {
      e.chain = ParseRateChain(fields[2]);
    } catch (const ContractError& err) {
      throw ParseError(err.what(), n + 1);
    }
    if (!internal::ParseDouble(fields[3], &e.speed) || !(e.speed > 0))
      throw ParseError("bad speed factor", n + 1);
    if (!seen.insert(e.id).second)
      throw ParseError("duplicate plan id " + e.id, n + 1);
    plan.entries.push_back(std::move(e));
  }
  return plan;
}

}  // namespace svkit
