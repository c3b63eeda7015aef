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

#include "svkit/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "io_util.h"
#include "svkit/errors.h"

namespace svkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckScores(const LabeledScores& scores) {
  SVKIT_REQUIRE(!scores.target.empty(), "no target scores");
  SVKIT_REQUIRE(!scores.nontarget.empty(), "no nontarget scores");
  for (double s : scores.target)
    SVKIT_REQUIRE(std::isfinite(s), "non-finite target score");
  for (double s : scores.nontarget)
    SVKIT_REQUIRE(std::isfinite(s), "non-finite nontarget score");
}

void CheckOperatingPoint(const OperatingPoint& op) {
  SVKIT_REQUIRE(op.p_target > 0 && op.p_target < 1,
                "p_target must be in (0, 1)");
  SVKIT_REQUIRE(op.c_miss > 0 && op.c_fa > 0, "costs must be positive");
}

double NormalizedDcf(const OperatingPoint& op, double p_miss, double p_fa) {
  const double miss_weight = op.c_miss * op.p_target;
  const double fa_weight = op.c_fa * (1.0 - op.p_target);
  return (miss_weight * p_miss + fa_weight * p_fa) /
         std::min(miss_weight, fa_weight);
}

DcfResult MinDcfOnRoc(const std::vector<RocPoint>& roc,
                      const OperatingPoint& op) {
  DcfResult best{kInf, kInf};
  for (const RocPoint& pt : roc) {
    const double v = NormalizedDcf(op, pt.p_miss, pt.p_fa);
    if (v < best.value) best = {v, pt.threshold};
  }
  return best;
}

}  // namespace

double OperatingPoint::EffectiveLogOdds() const {
  return std::log(p_target * c_miss / ((1.0 - p_target) * c_fa));
}

std::vector<OperatingPoint> DefaultCPrimaryPoints() {
  return {{0.01, 1.0, 1.0}, {0.005, 1.0, 1.0}};
}

std::vector<RocPoint> RocPoints(const LabeledScores& scores) {
  CheckScores(scores);
  std::vector<double> tgt = scores.target;
  std::vector<double> non = scores.nontarget;
  std::sort(tgt.begin(), tgt.end());
  std::sort(non.begin(), non.end());
  const double nt = static_cast<double>(tgt.size());
  const double nn = static_cast<double>(non.size());

  std::vector<double> thresholds;
  thresholds.reserve(tgt.size() + non.size());
  std::merge(tgt.begin(), tgt.end(), non.begin(), non.end(),
             std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  std::vector<RocPoint> roc;
  roc.reserve(thresholds.size() + 2);
  roc.push_back({-kInf, 0.0, 1.0});
  size_t misses = 0;  // targets below the threshold
  size_t below = 0;   // nontargets below the threshold
  for (double th : thresholds) {
    while (misses < tgt.size() && tgt[misses] < th) ++misses;
    while (below < non.size() && non[below] < th) ++below;
    roc.push_back({th, static_cast<double>(misses) / nt,
                   static_cast<double>(non.size() - below) / nn});
  }
  roc.push_back({kInf, 1.0, 0.0});
  return roc;
}

double Eer(const LabeledScores& scores) {
  const std::vector<RocPoint> roc = RocPoints(scores);
  for (size_t k = 0; k < roc.size(); ++k) {
    const double d = roc[k].p_miss - roc[k].p_fa;
    if (d < 0) continue;
    if (d == 0 || k == 0) return roc[k].p_miss;
    const RocPoint& a = roc[k - 1];
    const RocPoint& b = roc[k];
    const double da = a.p_miss - a.p_fa;
    const double t = -da / (d - da);
    return a.p_miss + t * (b.p_miss - a.p_miss);
  }
  return 1.0;  // unreachable: the last point has p_miss - p_fa = 1
}

DcfResult MinDcf(const LabeledScores& scores, const OperatingPoint& op) {
  CheckOperatingPoint(op);
  return MinDcfOnRoc(RocPoints(scores), op);
}

double ActDcf(const LabeledScores& scores, const OperatingPoint& op,
              double threshold) {
  CheckScores(scores);
  CheckOperatingPoint(op);
  size_t misses = 0;
  for (double s : scores.target) misses += s < threshold ? 1 : 0;
  size_t false_alarms = 0;
  for (double s : scores.nontarget) false_alarms += s >= threshold ? 1 : 0;
  return NormalizedDcf(
      op, static_cast<double>(misses) / static_cast<double>(scores.target.size()),
      static_cast<double>(false_alarms) /
          static_cast<double>(scores.nontarget.size()));
}

double CPrimary(const LabeledScores& scores,
                const std::vector<OperatingPoint>& ops) {
  SVKIT_REQUIRE(!ops.empty(), "C_primary needs at least one operating point");
  const std::vector<RocPoint> roc = RocPoints(scores);
  double sum = 0.0;
  for (const auto& op : ops) {
    CheckOperatingPoint(op);
    sum += MinDcfOnRoc(roc, op).value;
  }
  return sum / static_cast<double>(ops.size());
}

DcfCurve ComputeDcfCurve(const LabeledScores& scores, double lo, double hi,
                         int n_points,
                         const std::vector<OperatingPoint>& marked) {
  SVKIT_REQUIRE(lo < hi, "curve range must satisfy lo < hi");
  SVKIT_REQUIRE(n_points >= 2, "curve needs at least two points");
  const std::vector<RocPoint> roc = RocPoints(scores);
  DcfCurve curve;
  curve.points.reserve(static_cast<size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const double lambda = lo + (hi - lo) * i / (n_points - 1);
    const OperatingPoint op{1.0 / (1.0 + std::exp(-lambda)), 1.0, 1.0};
    CheckOperatingPoint(op);
    curve.points.push_back({lambda, MinDcfOnRoc(roc, op).value});
  }
  for (const auto& op : marked) {
    CheckOperatingPoint(op);
    curve.marked.push_back({op.EffectiveLogOdds(), MinDcfOnRoc(roc, op).value});
  }
  return curve;
}

std::string DcfCurveCsv(const DcfCurve& curve) {
  std::string out = "logodds,min_dcf\n";
  for (const auto& p : curve.points)
    out += internal::FormatG(p.log_odds, 10) + ',' +
           internal::FormatG(p.min_dcf, 10) + '\n';
  out += "# marked\n";
  for (const auto& p : curve.marked)
    out += internal::FormatG(p.log_odds, 10) + ',' +
           internal::FormatG(p.min_dcf, 10) + '\n';
  return out;
}

}  // namespace svkit
