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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.h"
#include "svkit/audio.h"
#include "svkit/backend.h"
#include "svkit/embedding_store.h"
#include "svkit/features.h"
#include "svkit/metrics.h"
#include "svkit/scoring.h"

namespace svkit {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "svkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code =
      cli::Run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void Spit(const fs::path& p, const std::string& s) {
  std::ofstream(p, std::ios::binary) << s;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = oracle::TempDir(::testing::UnitTest::GetInstance()
                               ->current_test_info()->name());
  }
  std::string P(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

// 40 speakers, 6 training utterances each plus one enrollment and two test
// utterances; 16-D embeddings with a speaker offset and nuisance noise.
struct Toy {
  EmbeddingSet train{16}, enroll{16}, test{16};
  std::map<std::string, std::string> labels;
  TrialList trials;
};

Toy MakeToy() {
  std::mt19937_64 rng(2026);
  std::normal_distribution<float> g;
  Toy t;
  std::vector<std::vector<float>> centers(40, std::vector<float>(16));
  for (auto& c : centers)
    for (auto& x : c) x = 2 * g(rng);
  auto draw = [&](int s) {
    std::vector<float> v(16);
    for (int j = 0; j < 16; ++j) v[j] = centers[s][j] + g(rng) + 3.0f;
    return v;
  };
  for (int s = 0; s < 40; ++s) {
    const std::string spk = "spk" + std::to_string(s);
    for (int u = 0; u < 6; ++u) {
      const std::string id = spk + "-tr" + std::to_string(u);
      t.train.Add(id, draw(s));
      t.labels[id] = spk;
    }
    t.enroll.Add(spk + "-enr", draw(s));
    t.test.Add(spk + "-te0", draw(s));
    t.test.Add(spk + "-te1", draw(s));
  }
  for (int s = 0; s < 40; ++s)
    for (int o = 0; o < 40; o += 3)
      for (int k = 0; k < 2; ++k)
        t.trials.Add({"spk" + std::to_string(s) + "-enr",
                      "spk" + std::to_string(o) + "-te" + std::to_string(k),
                      s == o ? TrialLabel::kTarget : TrialLabel::kNontarget});
  return t;
}

std::string TrialsText(const TrialList& trials) {
  std::string s;
  for (const auto& t : trials.trials())
    s += t.enroll + ' ' + t.test + ' ' +
         (*t.label == TrialLabel::kTarget ? "target" : "nontarget") + '\n';
  return s;
}

TEST_F(CliTest, EndToEndMatchesLibrary) {
  const Toy toy = MakeToy();
  WriteEmbeddings(toy.train, P("train.sveb"));
  WriteEmbeddings(toy.enroll, P("enroll.sveb"));
  WriteEmbeddings(toy.test, P("test.sveb"));
  WriteLabels(toy.labels, P("utt2spk"));
  Spit(P("trials"), TrialsText(toy.trials));

  auto r = RunCli({"fit-backend", "--train", P("train.sveb"), "--labels",
                   P("utt2spk"), "--center-set", P("train.sveb"), "--lda-dim",
                   "12", "--out", P("backend.svpl")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "stages: center lda length_norm\nlda: 16 -> 12\n");
  for (const char* part : {"enroll", "test"}) {
    r = RunCli({"apply-backend", "--pipeline", P("backend.svpl"), "--in",
                P(std::string(part) + ".sveb"), "--out",
                P(std::string(part) + ".bk.sveb")});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  r = RunCli({"score", "--enroll", P("enroll.bk.sveb"), "--test",
              P("test.bk.sveb"), "--trials", P("trials"), "--out",
              P("scores"), "--workers", "4", "--block-size", "17"});
  ASSERT_EQ(r.code, 0) << r.err;
  r = RunCli({"eval", "--scores", P("scores"), "--trials", P("trials")});
  ASSERT_EQ(r.code, 0) << r.err;

  // Library path.
  EmbeddingSet train = toy.train;
  AttachLabels(&train, toy.labels);
  FitOptions opts;
  opts.lda_dim = 12;
  const Pipeline p = FitPipeline(train, opts, &toy.train);
  EXPECT_EQ(EncodePipeline(p), Slurp(P("backend.svpl")));
  const EmbeddingSet enroll = ApplyPipeline(p, toy.enroll);
  const EmbeddingSet test = ApplyPipeline(p, toy.test);
  EXPECT_EQ(EncodeEmbeddings(enroll), Slurp(P("enroll.bk.sveb")));
  EXPECT_EQ(EncodeEmbeddings(test), Slurp(P("test.bk.sveb")));
  const EmbeddingSet models = ModelsToSet(BuildEnrollment(enroll));
  const auto scores = ScoreTrials(models, test, toy.trials);
  EXPECT_EQ(FormatScores(toy.trials, scores), Slurp(P("scores")));

  // The eval report uses the six-decimal scores from the file.
  LabeledScores ls;
  for (const auto& st : ReadScores(P("scores"))) {
    const bool tgt = st.enroll.substr(0, st.enroll.find('-')) ==
                     st.test.substr(0, st.test.find('-'));
    (tgt ? ls.target : ls.nontarget).push_back(st.score);
  }
  char line[64];
  std::snprintf(line, sizeof(line), "EER: %.2f%%\n", 100 * Eer(ls));
  EXPECT_NE(r.out.find(line), std::string::npos) << r.out;
  std::snprintf(line, sizeof(line), "C_primary (default operating points): %.3f\n",
                CPrimary(ls, DefaultCPrimaryPoints()));
  EXPECT_NE(r.out.find(line), std::string::npos) << r.out;

  // Idempotent: a second run writes identical bytes.
  const std::string first = Slurp(P("scores"));
  ASSERT_EQ(RunCli({"score", "--enroll", P("enroll.bk.sveb"), "--test",
                    P("test.bk.sveb"), "--trials", P("trials"), "--out",
                    P("scores")}).code, 0);
  EXPECT_EQ(Slurp(P("scores")), first);
}

TEST_F(CliTest, EvalPerfectSeparation) {
  Spit(P("scores"), "a x 0.9\na y 0.1\nb y 0.8\nb x 0.2\n");
  Spit(P("trials"), "a x target\na y nontarget\nb y target\nb x nontarget\n");
  const auto r = RunCli({"eval", "--scores", P("scores"), "--trials", P("trials"),
                         "--csv", P("report.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("EER: 0.00%\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("C_primary (default operating points): 0.000\n"),
            std::string::npos) << r.out;
  EXPECT_NE(r.out.find("minDCF[p=0.01,cmiss=1,cfa=1] (default): 0.0000"),
            std::string::npos) << r.out;
  EXPECT_EQ(Slurp(P("report.csv")).rfind("metric,p_target,c_miss,c_fa,value\n", 0),
            0u);
}

TEST_F(CliTest, DcfCurve) {
  Spit(P("scores"), "a x 0.9\na y 0.1\nb y 0.8\nb x 0.95\n");
  Spit(P("trials"), "a x target\na y nontarget\nb y target\nb x nontarget\n");
  const auto r = RunCli({"dcf-curve", "--scores", P("scores"), "--trials",
                         P("trials"), "--points", "5", "--op", "0.01"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  int rows = 0;
  std::getline(in, line);
  EXPECT_EQ(line, "logodds,min_dcf");
  while (std::getline(in, line) && line[0] != '#') ++rows;
  EXPECT_EQ(rows, 5);
}

TEST_F(CliTest, ScheduleDump) {
  const auto r = RunCli({"schedule", "--dump"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("stage,epoch,margin,lr,segment_s\n", 0), 0u);
  EXPECT_NE(r.out.find("\nmain,6,0,0.1,2\n"), std::string::npos);
  EXPECT_NE(r.out.find("\nlmf,1,0.5,"), std::string::npos);
}

TEST_F(CliTest, ConfigFile) {
  Spit(P("cfg.ini"), "[schedule]\ndump = true\npeak-lr = 0.2\n");
  auto r = RunCli({"--config", P("cfg.ini"), "schedule"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\nmain,6,0,0.2,2\n"), std::string::npos);
  // Flags win over the file.
  r = RunCli({"--config", P("cfg.ini"), "schedule", "--peak-lr", "0.3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\nmain,6,0,0.3,2\n"), std::string::npos);
  Spit(P("typo.ini"), "[schedule]\ndump = true\npeak-lrr = 0.2\n");
  r = RunCli({"--config", P("typo.ini"), "schedule"});
  EXPECT_EQ(r.code, cli::kExitUsage);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(RunCli({}).code, cli::kExitUsage);
  EXPECT_EQ(RunCli({"bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(RunCli({"eval", "--scores", P("missing"), "--trials", P("missing")})
                .code, cli::kExitIo);
  Spit(P("bad.sveb"), "SVEB\x07");
  EXPECT_EQ(RunCli({"apply-backend", "--pipeline", P("bad.sveb"), "--in",
                    P("bad.sveb"), "--out", P("o")}).code, cli::kExitFormat);
  Spit(P("trials"), "e t\ne t\n");
  Spit(P("e.tsv"), "e\t1\t0\n");
  EXPECT_EQ(RunCli({"score", "--enroll", P("e.tsv"), "--test", P("e.tsv"),
                    "--trials", P("trials")}).code, cli::kExitFormat);
  Spit(P("trials"), "e ghost\n");
  EXPECT_EQ(RunCli({"score", "--enroll", P("e.tsv"), "--test", P("e.tsv"),
                    "--trials", P("trials")}).code, cli::kExitContract);
  EXPECT_EQ(RunCli({"augment-plan", "--manifest", P("m")}).code, cli::kExitUsage);
  EXPECT_EQ(RunCli({"pool", "--in", P("e.tsv"), "--method", "asp"}).code,
            cli::kExitUsage);
}

TEST_F(CliTest, AugmentPlan) {
  std::string manifest;
  for (int i = 0; i < 10; ++i)
    manifest += "u" + std::to_string(i) + "\t/in/u" + std::to_string(i) +
                ".wav\t2.0\t16000\n";
  Spit(P("m.tsv"), manifest);
  const auto a = RunCli({"augment-plan", "--manifest", P("m.tsv"), "--seed", "3",
                         "--mode", "down8k", "--out-dir", "/out", "--plan",
                         P("plan.tsv")});
  ASSERT_EQ(a.code, 0) << a.err;
  const auto b = RunCli({"augment-plan", "--manifest", P("m.tsv"), "--seed", "3",
                         "--mode", "down8k", "--out-dir", "/out"});
  EXPECT_EQ(a.out, b.out);
  int gsm = 0, lines = 0;
  std::istringstream in(a.out);
  for (std::string l; std::getline(in, l); ++lines)
    gsm += l.find("-t gsm") != std::string::npos;
  EXPECT_EQ(lines, 10);
  EXPECT_EQ(gsm, 5);
  EXPECT_NE(Slurp(P("plan.tsv")).find("\tgsm\tdown8k\t1.0\n"), std::string::npos);
}

TEST_F(CliTest, PoolTstp) {
  Spit(P("frames.tsv"), "0\t0\t1\n1\t2\t3\n");
  const auto r = RunCli({"pool", "--in", P("frames.tsv")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::vector<double> v;
  std::string tok;
  while (in >> tok) v.push_back(std::stod(tok));
  ASSERT_GE(v.size(), 4u);
  const std::vector<double> tail(v.end() - 4, v.end());
  EXPECT_NEAR(tail[0], 1, 1e-9);
  EXPECT_NEAR(tail[1], 2, 1e-9);
  EXPECT_NEAR(tail[2], 1, 1e-9);
  EXPECT_NEAR(tail[3], 1, 1e-9);
}

TEST_F(CliTest, FeaturesOnGeneratedWavs) {
  fs::create_directories(dir_ / "wav");
  const std::vector<std::pair<std::string, size_t>> wavs = {
      {"tone", 16000}, {"chirp", 12345}, {"short", 400}};
  for (const auto& [name, n] : wavs) {
    AudioBuffer a{oracle::Sine(440 + n % 1000, 16000, n, 0.3), 16000};
    WriteWav(a, (dir_ / "wav" / (name + ".wav")).string());
  }
  const auto r = RunCli({"features", "--in", P("wav"), "--out-dir", P("feats")});
  ASSERT_EQ(r.code, 0) << r.err;
  const FrameSpec frame;
  for (const auto& [name, n] : wavs) {
    const int64_t want = frame.NumFrames(static_cast<int64_t>(n), 16000);
    EXPECT_NE(r.out.find(name + '\t' + std::to_string(want) + '\t' +
                         std::to_string(want) + '\n'),
              std::string::npos) << r.out;
    // Golden: the module-level computation on the same file.
    const AudioBuffer a = ReadWav((dir_ / "wav" / (name + ".wav")).string());
    const EmbeddingSet golden = FeaturesToSet(LogMelFbank(a));
    EXPECT_EQ(ReadEmbeddings(P("feats/" + name + ".sveb")), golden);
  }
  const auto v = RunCli({"features", "--in", P("wav"), "--out-dir", P("vad"),
                         "--vad"});
  EXPECT_EQ(v.code, 0) << v.err;

  fs::create_directories(dir_ / "empty");
  EXPECT_EQ(RunCli({"features", "--in", P("empty"), "--out-dir", P("x")}).code,
            cli::kExitUsage);
}

}  // namespace
}  // namespace svkit
