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

#include "cli.h"

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "io_util.h"
#include "svkit/audio.h"
#include "svkit/augment.h"
#include "svkit/backend.h"
#include "svkit/embedding_store.h"
#include "svkit/errors.h"
#include "svkit/features.h"
#include "svkit/metrics.h"
#include "svkit/objectives.h"
#include "svkit/pooling.h"
#include "svkit/random.h"
#include "svkit/scoring.h"

namespace svkit::cli {

namespace fs = std::filesystem;
using internal::FormatFixed;
using internal::FormatG;

namespace {

// Raised for argument combinations CLI11 cannot express.
class UsageError : public Error {
 public:
  using Error::Error;
};

int ExitCodeFor(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e)) return kExitUsage;
  if (dynamic_cast<const FormatError*>(&e)) return kExitFormat;
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  if (dynamic_cast<const fs::filesystem_error*>(&e)) return kExitIo;
  return kExitContract;
}

// "-" or empty writes to the stream.
void Emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    internal::WriteFile(path, text);
  }
}

OperatingPoint ParseOperatingPoint(const std::string& text) {
  std::vector<double> parts;
  size_t start = 0;
  while (start <= text.size()) {
    size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    double v;
    if (!internal::ParseDouble(std::string_view(text).substr(start, comma - start), &v))
      throw UsageError("bad operating point '" + text +
                       "', expected p_target[,c_miss,c_fa]");
    parts.push_back(v);
    start = comma + 1;
  }
  if (parts.size() != 1 && parts.size() != 3)
    throw UsageError("bad operating point '" + text +
                     "', expected p_target[,c_miss,c_fa]");
  OperatingPoint op{parts[0], 1.0, 1.0};
  if (parts.size() == 3) {
    op.c_miss = parts[1];
    op.c_fa = parts[2];
  }
  return op;
}

std::string DescribeOp(const OperatingPoint& op) {
  return "p=" + FormatG(op.p_target, 6) + ",cmiss=" + FormatG(op.c_miss, 6) +
         ",cfa=" + FormatG(op.c_fa, 6);
}

// Joins a score file with a labeled trial list. Every trial needs a score.
LabeledScores JoinScores(const std::string& scores_path,
                         const std::string& trials_path) {
  const TrialList trials = ReadTrials(trials_path);
  if (!trials.labeled())
    throw FormatError("trial list " + trials_path + " has no labels");
  std::map<std::pair<std::string, std::string>, double> by_pair;
  for (auto& s : ReadScores(scores_path))
    by_pair[{s.enroll, s.test}] = s.score;
  LabeledScores out;
  for (const Trial& t : trials.trials()) {
    auto it = by_pair.find({t.enroll, t.test});
    if (it == by_pair.end()) throw LookupError(t.enroll + " " + t.test);
    (*t.label == TrialLabel::kTarget ? out.target : out.nontarget)
        .push_back(it->second);
  }
  return out;
}

// ---------------------------------------------------------------- features

struct FeaturesArgs {
  std::string in;
  std::string out_dir;
  int num_mel_bins = 80;
  double frame_length = 25.0;
  double frame_shift = 10.0;
  double preemphasis = 0.97;
  double low_freq = 20.0;
  double high_freq = 0.0;
  double log_floor = 1e-10;
  double dither = 0.0;
  uint64_t seed = 0;
  int resample_to = 0;
  bool vad = false;
  double vad_threshold = 5.0;
  double vad_mean_scale = 0.5;
  int vad_context = 5;
  double vad_proportion = 0.6;
  bool tsv = false;
};

std::vector<std::string> ListWavInputs(const std::string& in) {
  std::vector<std::string> paths;
  if (fs::is_directory(in)) {
    for (const auto& entry : fs::directory_iterator(in)) {
      if (entry.is_regular_file() && entry.path().extension() == ".wav")
        paths.push_back(entry.path().string());
    }
    std::sort(paths.begin(), paths.end());
  } else {
    const std::string list = internal::ReadFile(in);
    for (auto line : internal::SplitLines(list)) {
      auto trimmed = internal::Trim(line);
      if (!trimmed.empty() && trimmed.front() != '#')
        paths.emplace_back(trimmed);
    }
  }
  if (paths.empty()) throw UsageError("no wav inputs found in " + in);
  return paths;
}

int RunFeatures(const FeaturesArgs& a, std::ostream& out, std::ostream& err) {
  FbankConfig fbank;
  fbank.frame = {a.frame_length, a.frame_shift};
  fbank.num_mel_bins = a.num_mel_bins;
  fbank.preemphasis = a.preemphasis;
  fbank.low_freq = a.low_freq;
  if (a.high_freq > 0) fbank.high_freq = a.high_freq;
  fbank.log_floor = a.log_floor;
  fbank.dither = a.dither;
  fbank.dither_seed = a.seed;
  VadConfig vad;
  vad.frame = fbank.frame;
  vad.energy_threshold = a.vad_threshold;
  vad.energy_mean_scale = a.vad_mean_scale;
  vad.context_frames = a.vad_context;
  vad.proportion_threshold = a.vad_proportion;

  const std::vector<std::string> inputs = ListWavInputs(a.in);
  fs::create_directories(a.out_dir);
  int status = kExitOk;
  for (const std::string& path : inputs) {
    try {
      AudioBuffer audio = ReadWav(path);
      if (a.resample_to > 0) audio = Resample(audio, a.resample_to);
      if (audio.sample_rate != 8000 && audio.sample_rate != 16000) {
        throw ContractError("sample rate " + std::to_string(audio.sample_rate) +
                            " is not 8000 or 16000");
      }
      FeatureMatrix feats = LogMelFbank(audio, fbank);
      const Eigen::Index total = feats.num_frames();
      if (a.vad) feats = ApplyVad(feats, EnergyVad(audio, vad));
      const std::string stem = fs::path(path).stem().string();
      const std::string base = (fs::path(a.out_dir) / stem).string();
      WriteEmbeddings(FeaturesToSet(feats), base + ".sveb");
      if (a.tsv) WriteFeaturesTsv(feats, base + ".tsv");
      out << stem << '\t' << feats.num_frames() << '\t' << total << '\n';
    } catch (const Error& e) {
      err << "svkit features: " << path << ": " << e.what() << '\n';
      if (status == kExitOk) status = ExitCodeFor(e);
    }
  }
  return status;
}

// -------------------------------------------------------------------- pool

struct PoolArgs {
  std::string in;
  std::string out;
  std::string method = "tstp";
  std::optional<uint64_t> seed;
  int hidden = 16;
  int layers = 1;
  int heads = 64;
  int embedding_dim = 256;
  int key_dim = 64;
  double prior_mean = 0.0;
  double prior_log_precision = -60.0;
};

Matrix RandomMatrix(Eigen::Index rows, Eigen::Index cols, double scale,
                    Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      m(i, j) = UniformReal(rng, -scale, scale);
  return m;
}

int RunPool(const PoolArgs& a, std::ostream& out) {
  const EmbeddingSet frames_set = ReadEmbeddings(a.in);
  const Matrix frames = frames_set.ToMatrix();
  if (frames.rows() == 0) throw ContractError("no frames in " + a.in);
  const bool needs_seed = a.method == "asp" || a.method == "mhfa";
  if (needs_seed && !a.seed)
    throw UsageError("--seed is required for random " + a.method + " parameters");
  Rng rng(a.seed.value_or(0));

  Vector pooled;
  if (a.method == "tstp") {
    pooled = Tstp(frames);
  } else if (a.method == "asp") {
    AspParams params;
    params.hidden = RandomMatrix(frames.cols(), a.hidden, 1.0, rng);
    params.score = RandomMatrix(a.hidden, 1, 1.0, rng).col(0);
    pooled = Asp(frames, params);
  } else if (a.method == "xi") {
    if (frames.cols() % 2 != 0)
      throw ContractError("xi input needs D estimates followed by D log-precisions");
    const Eigen::Index d = frames.cols() / 2;
    XiFrameStats stats{frames.leftCols(d), frames.rightCols(d)};
    XiPrior prior{Vector::Constant(d, a.prior_mean),
                  Vector::Constant(d, a.prior_log_precision)};
    pooled = XiPool(stats, prior).mean;
  } else if (a.method == "mhfa") {
    if (a.layers < 1 || frames.cols() % a.layers != 0)
      throw ContractError("frame dim is not divisible by --layers");
    const Eigen::Index d = frames.cols() / a.layers;
    LayerStack stack;
    for (int l = 0; l < a.layers; ++l)
      stack.push_back(frames.middleCols(l * d, d));
    MhfaParams p = MhfaParams::Zeros(a.layers, static_cast<int>(d), a.key_dim,
                                     a.heads, a.embedding_dim);
    p.layer_weights_k = RandomMatrix(a.layers, 1, 1.0, rng).col(0);
    p.layer_weights_v = RandomMatrix(a.layers, 1, 1.0, rng).col(0);
    p.key_proj = RandomMatrix(p.key_proj.rows(), p.key_proj.cols(), 0.1, rng);
    p.value_proj =
        RandomMatrix(p.value_proj.rows(), p.value_proj.cols(), 0.1, rng);
    p.queries = RandomMatrix(p.queries.rows(), p.queries.cols(), 1.0, rng);
    p.out_proj = RandomMatrix(p.out_proj.rows(), p.out_proj.cols(), 0.1, rng);
    pooled = Mhfa(stack, p);
  } else {
    throw UsageError("unknown pooling method '" + a.method + "'");
  }
  std::string text;
  for (Eigen::Index i = 0; i < pooled.size(); ++i) {
    if (i) text += '\t';
    text += FormatG(pooled[i], 9);
  }
  text += '\n';
  Emit(a.out, text, out);
  return kExitOk;
}

// ----------------------------------------------------------------- backend

struct FitBackendArgs {
  std::string train;
  std::string labels;
  std::string center_set;
  std::string out;
  bool no_center = false;
  bool no_lda = false;
  bool no_length_norm = false;
  int lda_dim = 0;
};

int RunFitBackend(const FitBackendArgs& a, std::ostream& out) {
  FitOptions options;
  options.center = !a.no_center;
  options.lda = !a.no_lda;
  options.lda_dim = a.lda_dim;
  options.length_norm = !a.no_length_norm;
  if (options.center && a.center_set.empty())
    throw UsageError("--center-set is required unless --no-center is given");
  if (options.lda && a.labels.empty())
    throw UsageError("--labels is required unless --no-lda is given");

  EmbeddingSet train = ReadEmbeddings(a.train);
  if (!a.labels.empty()) AttachLabels(&train, ReadLabels(a.labels));
  std::optional<EmbeddingSet> center;
  if (options.center) center = ReadEmbeddings(a.center_set);
  const Pipeline p =
      FitPipeline(train, options, center ? &*center : nullptr);
  SavePipeline(p, a.out);
  out << "stages:" << (p.center ? " center" : "") << (p.lda ? " lda" : "")
      << (p.length_norm ? " length_norm" : "") << '\n';
  if (p.lda) {
    out << "lda: " << p.lda->input_dim() << " -> " << p.lda->output_dim()
        << '\n';
  }
  return kExitOk;
}

struct ApplyBackendArgs {
  std::string pipeline;
  std::string in;
  std::string out;
  std::string format = "sveb";
};

int RunApplyBackend(const ApplyBackendArgs& a) {
  const Pipeline p = LoadPipeline(a.pipeline);
  const EmbeddingSet result = ApplyPipeline(p, ReadEmbeddings(a.in));
  if (a.format == "tsv") {
    WriteEmbeddingsTsv(result, a.out);
  } else if (a.format == "sveb") {
    WriteEmbeddings(result, a.out);
  } else {
    throw UsageError("unknown output format '" + a.format + "'");
  }
  return kExitOk;
}

// ------------------------------------------------------------------- score

struct ScoreArgs {
  std::string enroll;
  std::string test;
  std::string trials;
  std::string enroll_map;
  std::string out;
  int workers = 1;
  size_t block_size = 256;
};

int RunScore(const ScoreArgs& a, std::ostream& out) {
  const EmbeddingSet enroll = ReadEmbeddings(a.enroll);
  const EmbeddingSet tests = ReadEmbeddings(a.test);
  const TrialList trials = ReadTrials(a.trials);
  std::optional<std::map<std::string, std::vector<std::string>>> model_map;
  if (!a.enroll_map.empty()) model_map = ReadEnrollmentMap(a.enroll_map);
  const EmbeddingSet models =
      ModelsToSet(BuildEnrollment(enroll, model_map ? &*model_map : nullptr));
  const std::vector<double> scores =
      ScoreTrials(models, tests, trials, {a.workers, a.block_size});
  Emit(a.out, FormatScores(trials, scores), out);
  return kExitOk;
}

// ----------------------------------------------------------- eval / curves

struct EvalArgs {
  std::string scores;
  std::string trials;
  std::vector<std::string> ops;
  std::optional<double> act_threshold;
  std::string csv;
};

int RunEval(const EvalArgs& a, std::ostream& out) {
  const LabeledScores scores = JoinScores(a.scores, a.trials);
  const bool defaults = a.ops.empty();
  std::vector<OperatingPoint> ops;
  if (defaults) {
    ops = DefaultCPrimaryPoints();
  } else {
    for (const auto& s : a.ops) ops.push_back(ParseOperatingPoint(s));
  }
  const std::string tag = defaults ? " (default operating points)" : "";
  const double eer = Eer(scores);
  const double cprimary = CPrimary(scores, ops);

  std::string text = "trials: " + std::to_string(scores.target.size()) +
                     " target, " + std::to_string(scores.nontarget.size()) +
                     " nontarget\n";
  text += "EER: " + FormatFixed(100.0 * eer, 2) + "%\n";
  std::string csv = "metric,p_target,c_miss,c_fa,value\n";
  csv += "eer,,,," + FormatG(eer, 10) + '\n';
  for (const auto& op : ops) {
    const DcfResult r = MinDcf(scores, op);
    text += "minDCF[" + DescribeOp(op) + "]" + (defaults ? " (default)" : "") +
            ": " + FormatFixed(r.value, 4) + '\n';
    const std::string cols = FormatG(op.p_target, 10) + ',' +
                             FormatG(op.c_miss, 10) + ',' +
                             FormatG(op.c_fa, 10) + ',';
    csv += "min_dcf," + cols + FormatG(r.value, 10) + '\n';
    if (a.act_threshold) {
      const double act = ActDcf(scores, op, *a.act_threshold);
      text += "actDCF[" + DescribeOp(op) + "] at " +
              FormatG(*a.act_threshold, 6) + ": " + FormatFixed(act, 4) + '\n';
      csv += "act_dcf," + cols + FormatG(act, 10) + '\n';
    }
  }
  text += "C_primary" + tag + ": " + FormatFixed(cprimary, 3) + '\n';
  csv += "c_primary,,,," + FormatG(cprimary, 10) + '\n';
  out << text;
  if (!a.csv.empty()) internal::WriteFile(a.csv, csv);
  return kExitOk;
}

struct DcfCurveArgs {
  std::string scores;
  std::string trials;
  double lo = -8.0;
  double hi = 2.0;
  int points = 101;
  std::vector<std::string> ops;
  std::string out;
};

int RunDcfCurve(const DcfCurveArgs& a, std::ostream& out) {
  const LabeledScores scores = JoinScores(a.scores, a.trials);
  std::vector<OperatingPoint> ops;
  if (a.ops.empty()) {
    ops = DefaultCPrimaryPoints();
  } else {
    for (const auto& s : a.ops) ops.push_back(ParseOperatingPoint(s));
  }
  Emit(a.out, DcfCurveCsv(ComputeDcfCurve(scores, a.lo, a.hi, a.points, ops)),
       out);
  return kExitOk;
}

// ------------------------------------------------------------ augmentation

struct AugmentArgs {
  std::string manifest;
  double fraction = 0.5;
  std::string mode = "down8k";
  std::optional<uint64_t> seed;
  bool speed_perturb = false;
  bool by_speaker = false;
  std::string out_dir = ".";
  std::string plan;
  std::string commands;
};

int RunAugmentPlan(const AugmentArgs& a, std::ostream& out) {
  if (!a.seed) throw UsageError("--seed is required");
  const RateChain mode = ParseRateChain(a.mode);
  const UtteranceManifest manifest = ReadManifest(a.manifest);
  AugmentPlan plan = a.by_speaker
                         ? AssignCodecBySpeaker(manifest, a.fraction, *a.seed)
                         : AssignCodec(manifest, a.fraction, *a.seed);
  plan = PlanRateChain(std::move(plan), mode);
  // Derived stream so codec and speed draws are independent.
  plan = AssignSpeed(std::move(plan), a.speed_perturb, *a.seed + 1);
  if (!a.plan.empty()) internal::WriteFile(a.plan, FormatPlan(plan));
  const std::string commands = EmitCommands(plan, manifest, a.out_dir);
  if (!a.commands.empty()) {
    internal::WriteFile(a.commands, commands);
  } else {
    out << commands;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- schedule

struct ScheduleArgs {
  TrainingRecipe recipe;
  bool dump = false;
  std::string out;
};

int RunSchedule(const ScheduleArgs& a, std::ostream& out) {
  const auto rows = ExpandRecipe(a.recipe);
  if (a.dump || !a.out.empty()) {
    Emit(a.out, ScheduleCsv(rows), out);
    return kExitOk;
  }
  const auto& r = a.recipe;
  out << "main: " << r.lr.total_epochs << " epochs, " << r.segment_seconds
      << " s segments, warmup " << r.lr.warmup_epochs << " -> peak lr "
      << FormatG(r.lr.peak, 6) << ", decay to " << FormatG(r.lr.final, 6)
      << "\nmargin: " << r.margin.initial << " until epoch "
      << r.margin.start_epoch << ", " << r.margin.final << " from epoch "
      << r.margin.end_epoch << "\nlmf: " << r.lmf_epochs << " epochs, "
      << r.lmf_segment_seconds << " s segments, margin "
      << r.margin.lmf_margin << "\n(use --dump for the per-epoch CSV)\n";
  return kExitOk;
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Speaker-verification backend and evaluation toolkit", "svkit"};
  app.set_config("--config", "", "Sectioned key = value config file");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  FeaturesArgs feat;
  auto* features = app.add_subcommand("features", "Log-Mel filterbank features");
  features->add_option("--in", feat.in, "WAV directory or list file")->required();
  features->add_option("--out-dir", feat.out_dir, "Output directory")->required();
  features->add_option("--num-mel-bins", feat.num_mel_bins)->capture_default_str();
  features->add_option("--frame-length", feat.frame_length, "ms")->capture_default_str();
  features->add_option("--frame-shift", feat.frame_shift, "ms")->capture_default_str();
  features->add_option("--preemphasis", feat.preemphasis)->capture_default_str();
  features->add_option("--low-freq", feat.low_freq)->capture_default_str();
  features->add_option("--high-freq", feat.high_freq, "0 = Nyquist")->capture_default_str();
  features->add_option("--log-floor", feat.log_floor)->capture_default_str();
  features->add_option("--dither", feat.dither)->capture_default_str();
  features->add_option("--seed", feat.seed, "Dither seed");
  features->add_option("--resample-to", feat.resample_to, "Hz, 0 = keep");
  features->add_flag("--vad", feat.vad, "Drop non-speech frames");
  features->add_option("--vad-energy-threshold", feat.vad_threshold)->capture_default_str();
  features->add_option("--vad-energy-mean-scale", feat.vad_mean_scale)->capture_default_str();
  features->add_option("--vad-context", feat.vad_context)->capture_default_str();
  features->add_option("--vad-proportion", feat.vad_proportion)->capture_default_str();
  features->add_flag("--tsv", feat.tsv, "Also write a TSV dump per utterance");

  PoolArgs pool;
  auto* pool_cmd = app.add_subcommand("pool", "Pool a frame matrix into one vector");
  pool_cmd->add_option("--in", pool.in, "Frame matrix (SVEB or TSV)")->required();
  pool_cmd->add_option("--out", pool.out, "Output TSV (default stdout)");
  pool_cmd->add_option("--method", pool.method)
      ->check(CLI::IsMember({"tstp", "asp", "xi", "mhfa"}))
      ->capture_default_str();
  pool_cmd->add_option("--seed", pool.seed, "Seed for random asp/mhfa parameters");
  pool_cmd->add_option("--hidden", pool.hidden, "asp hidden size")->capture_default_str();
  pool_cmd->add_option("--layers", pool.layers, "mhfa layer count")->capture_default_str();
  pool_cmd->add_option("--heads", pool.heads)->capture_default_str();
  pool_cmd->add_option("--embedding-dim", pool.embedding_dim)->capture_default_str();
  pool_cmd->add_option("--key-dim", pool.key_dim)->capture_default_str();
  pool_cmd->add_option("--prior-mean", pool.prior_mean)->capture_default_str();
  pool_cmd->add_option("--prior-log-precision", pool.prior_log_precision)
      ->capture_default_str();

  FitBackendArgs fit;
  auto* fit_cmd = app.add_subcommand("fit-backend", "Fit center/LDA/length-norm");
  fit_cmd->add_option("--train", fit.train, "Training embeddings")->required();
  fit_cmd->add_option("--labels", fit.labels, "id -> speaker TSV");
  fit_cmd->add_option("--center-set", fit.center_set, "Embeddings for the centering mean");
  fit_cmd->add_option("--out", fit.out, "Pipeline file")->required();
  fit_cmd->add_flag("--no-center", fit.no_center);
  fit_cmd->add_flag("--no-lda", fit.no_lda);
  fit_cmd->add_flag("--no-length-norm", fit.no_length_norm);
  fit_cmd->add_option("--lda-dim", fit.lda_dim, "0 = n_classes - 1");

  ApplyBackendArgs apply;
  auto* apply_cmd = app.add_subcommand("apply-backend", "Apply a fitted pipeline");
  apply_cmd->add_option("--pipeline", apply.pipeline)->required();
  apply_cmd->add_option("--in", apply.in)->required();
  apply_cmd->add_option("--out", apply.out)->required();
  apply_cmd->add_option("--format", apply.format)
      ->check(CLI::IsMember({"sveb", "tsv"}))
      ->capture_default_str();

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "Cosine-score a trial list");
  score_cmd->add_option("--enroll", score.enroll, "Enrollment embeddings")->required();
  score_cmd->add_option("--test", score.test, "Test embeddings")->required();
  score_cmd->add_option("--trials", score.trials)->required();
  score_cmd->add_option("--enroll-map", score.enroll_map,
                        "`model segment...` lines; default one model per id");
  score_cmd->add_option("--out", score.out, "Score TSV (default stdout)");
  score_cmd->add_option("--workers", score.workers)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  score_cmd->add_option("--block-size", score.block_size)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "EER, minDCF and C_primary");
  eval_cmd->add_option("--scores", eval.scores)->required();
  eval_cmd->add_option("--trials", eval.trials, "Labeled trial list")->required();
  eval_cmd->add_option("--op", eval.ops, "p_target[,c_miss,c_fa]; repeatable");
  eval_cmd->add_option("--act-threshold", eval.act_threshold,
                       "Also report actual DCF at this threshold");
  eval_cmd->add_option("--csv", eval.csv, "Write the report as CSV");

  DcfCurveArgs curve;
  auto* curve_cmd = app.add_subcommand("dcf-curve", "minDCF over effective priors");
  curve_cmd->add_option("--scores", curve.scores)->required();
  curve_cmd->add_option("--trials", curve.trials)->required();
  curve_cmd->add_option("--lo", curve.lo, "Lowest log-odds")->capture_default_str();
  curve_cmd->add_option("--hi", curve.hi, "Highest log-odds")->capture_default_str();
  curve_cmd->add_option("--points", curve.points)->capture_default_str();
  curve_cmd->add_option("--op", curve.ops, "Marked operating point; repeatable");
  curve_cmd->add_option("--out", curve.out, "CSV (default stdout)");

  AugmentArgs aug;
  auto* aug_cmd = app.add_subcommand("augment-plan", "Plan codec/rate/speed augmentation");
  aug_cmd->add_option("--manifest", aug.manifest, "id path duration rate [speaker]")
      ->required();
  aug_cmd->add_option("--fraction", aug.fraction, "Codec fraction")->capture_default_str();
  aug_cmd->add_option("--mode", aug.mode)
      ->check(CLI::IsMember({"keep16k", "down8k", "down8k-up16k"}))
      ->capture_default_str();
  aug_cmd->add_option("--seed", aug.seed);
  aug_cmd->add_flag("--speed-perturb", aug.speed_perturb);
  aug_cmd->add_flag("--by-speaker", aug.by_speaker, "Select speakers, not utterances");
  aug_cmd->add_option("--out-dir", aug.out_dir, "Destination of converted audio")
      ->capture_default_str();
  aug_cmd->add_option("--plan", aug.plan, "Write the plan TSV");
  aug_cmd->add_option("--commands", aug.commands, "Command manifest (default stdout)");

  ScheduleArgs sched;
  auto& r = sched.recipe;
  auto* sched_cmd = app.add_subcommand("schedule", "Margin and learning-rate recipe");
  sched_cmd->add_flag("--dump", sched.dump, "Print the per-epoch CSV");
  sched_cmd->add_option("--out", sched.out, "Write the CSV to a file");
  sched_cmd->add_option("--epochs", r.lr.total_epochs)->capture_default_str();
  sched_cmd->add_option("--warmup-epochs", r.lr.warmup_epochs)->capture_default_str();
  sched_cmd->add_option("--peak-lr", r.lr.peak)->capture_default_str();
  sched_cmd->add_option("--final-lr", r.lr.final)->capture_default_str();
  sched_cmd->add_option("--margin-start", r.margin.start_epoch)->capture_default_str();
  sched_cmd->add_option("--margin-end", r.margin.end_epoch)->capture_default_str();
  sched_cmd->add_option("--margin-initial", r.margin.initial)->capture_default_str();
  sched_cmd->add_option("--margin-final", r.margin.final)->capture_default_str();
  sched_cmd->add_option("--lmf-margin", r.margin.lmf_margin)->capture_default_str();
  sched_cmd->add_option("--segment", r.segment_seconds, "s")->capture_default_str();
  sched_cmd->add_option("--lmf-epochs", r.lmf_epochs)->capture_default_str();
  sched_cmd->add_option("--lmf-segment", r.lmf_segment_seconds, "s")
      ->capture_default_str();
  sched_cmd->add_option("--lmf-lr", r.lmf_lr, "Default: the final main-stage rate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*features) return RunFeatures(feat, out, err);
    if (*pool_cmd) return RunPool(pool, out);
    if (*fit_cmd) return RunFitBackend(fit, out);
    if (*apply_cmd) return RunApplyBackend(apply);
    if (*score_cmd) return RunScore(score, out);
    if (*eval_cmd) return RunEval(eval, out);
    if (*curve_cmd) return RunDcfCurve(curve, out);
    if (*aug_cmd) return RunAugmentPlan(aug, out);
    if (*sched_cmd) return RunSchedule(sched, out);
  } catch (const std::exception& e) {
    err << "svkit: " << e.what() << '\n';
    return ExitCodeFor(e);
  }
  return kExitUsage;
}

}  // namespace svkit::cli
