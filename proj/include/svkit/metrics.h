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

#ifndef SVKIT_METRICS_H_
#define SVKIT_METRICS_H_

#include <string>
#include <vector>

namespace svkit {

// Detection metrics. A trial is accepted iff score >= threshold.

struct LabeledScores {
  std::vector<double> target;
  std::vector<double> nontarget;
};

struct OperatingPoint {
  double p_target = 0.01;
  double c_miss = 1.0;
  double c_fa = 1.0;

  // logit of the effective target prior.
  double EffectiveLogOdds() const;
};

// Defaults used when no operating points are configured. They are
// placeholders to be checked against the official evaluation plan.
std::vector<OperatingPoint> DefaultCPrimaryPoints();

struct RocPoint {
  double threshold;  // -inf and +inf at the two ends
  double p_miss;
  double p_fa;
};

// One point per distinct score plus both infinities, in increasing
// threshold order: p_miss non-decreasing, p_fa non-increasing.
std::vector<RocPoint> RocPoints(const LabeledScores& scores);

// Crossing of p_miss and p_fa, linearly interpolated along the ROC polyline.
double Eer(const LabeledScores& scores);

struct DcfResult {
  double value;      // normalized
  double threshold;  // smallest threshold achieving the minimum
};

// Normalized by min(c_miss p, c_fa (1 - p)) over the pooled sweep.
DcfResult MinDcf(const LabeledScores& scores, const OperatingPoint& op);
double ActDcf(const LabeledScores& scores, const OperatingPoint& op,
              double threshold);

// Mean of the normalized minDCF over `ops`; empty `ops` is an error.
double CPrimary(const LabeledScores& scores,
                const std::vector<OperatingPoint>& ops);

struct DcfCurvePoint {
  double log_odds;
  double min_dcf;
};

struct DcfCurve {
  std::vector<DcfCurvePoint> points;
  std::vector<DcfCurvePoint> marked;
};

// n_points effective-prior log-odds evenly spaced on [lo, hi]; each value
// is the normalized minDCF at prior sigmoid(log-odds) with unit costs.
// Marked points are evaluated at each operating point's effective prior.
DcfCurve ComputeDcfCurve(const LabeledScores& scores, double lo, double hi,
                         int n_points,
                         const std::vector<OperatingPoint>& marked = {});
// `logodds,min_dcf` rows, then a `# marked` line and the marked rows.
std::string DcfCurveCsv(const DcfCurve& curve);

}  // namespace svkit

#endif  // SVKIT_METRICS_H_
