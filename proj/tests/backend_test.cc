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
#include <random>

#include "gtest/gtest.h"
#include "oracles.h"
#include "svkit/errors.h"

namespace svkit {
namespace {

// Scatter matrices by explicit per-class loops, both divided by N.
void ReferenceScatter(const Eigen::MatrixXd& x,
                      const std::vector<std::string>& labels,
                      Eigen::MatrixXd* sw, Eigen::MatrixXd* sb) {
  const Eigen::Index d = x.cols();
  std::map<std::string, std::vector<Eigen::Index>> groups;
  for (Eigen::Index i = 0; i < x.rows(); ++i) groups[labels[i]].push_back(i);
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(d);
  for (Eigen::Index i = 0; i < x.rows(); ++i) mu += x.row(i).transpose();
  mu /= static_cast<double>(x.rows());
  *sw = Eigen::MatrixXd::Zero(d, d);
  *sb = Eigen::MatrixXd::Zero(d, d);
  for (const auto& [name, idx] : groups) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(d);
    for (auto i : idx) m += x.row(i).transpose();
    m /= static_cast<double>(idx.size());
    for (auto i : idx) {
      const Eigen::VectorXd r = x.row(i).transpose() - m;
      *sw += r * r.transpose();
    }
    *sb += static_cast<double>(idx.size()) * (m - mu) * (m - mu).transpose();
  }
  *sw /= static_cast<double>(x.rows());
  *sb /= static_cast<double>(x.rows());
}

struct Toy {
  Matrix rows;
  std::vector<std::string> labels;
};

Toy Clusters(std::mt19937_64& rng, const Eigen::MatrixXd& means, int per_class,
             double noise) {
  Toy t;
  const Eigen::Index c = means.rows(), d = means.cols();
  t.rows.resize(c * per_class, d);
  const Eigen::MatrixXd n = oracle::RandomNormal(c * per_class, d, rng, noise);
  for (Eigen::Index k = 0; k < c; ++k)
    for (int i = 0; i < per_class; ++i) {
      t.rows.row(k * per_class + i) = means.row(k) + n.row(k * per_class + i);
      t.labels.push_back("spk" + std::to_string(k));
    }
  return t;
}

TEST(CenterTest, Examples) {
  Matrix a(2, 2);
  a << 1, 0, -1, 0;
  EXPECT_EQ(FitCenter(a).mean, Vector::Zero(2));
  Matrix b(1, 3);
  b << 1, 2, 3;
  EXPECT_EQ(FitCenter(b).mean, b.row(0).transpose());
  std::mt19937_64 rng(1);
  const Matrix r = oracle::RandomNormal(37, 5, rng, 4.0);
  Eigen::VectorXd want = Eigen::VectorXd::Zero(5);
  for (int i = 0; i < 37; ++i) want += r.row(i).transpose();
  want /= 37;
  EXPECT_LT((FitCenter(r).mean - want).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(FitCenter(Matrix(0, 3)), ContractError);
}

TEST(ScatterTest, MatchesReference) {
  std::mt19937_64 rng(2);
  const Toy t = Clusters(rng, oracle::RandomNormal(4, 3, rng, 3.0), 10, 1.0);
  const Scatter s = ComputeScatter(t.rows, t.labels);
  Eigen::MatrixXd sw, sb;
  ReferenceScatter(t.rows, t.labels, &sw, &sb);
  EXPECT_EQ(s.num_classes, 4);
  EXPECT_LT((s.within - sw).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((s.between - sb).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(LdaTest, TwoClassAxis) {
  std::mt19937_64 rng(3);
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(2, 10);
  means(0, 0) = 1;
  means(1, 0) = -1;
  const Toy t = Clusters(rng, means, 500, 1.0);
  const LdaStage lda = FitLda(t.rows, t.labels, 1);
  ASSERT_EQ(lda.output_dim(), 1);
  EXPECT_GT(std::abs(lda.projection(0, 0)), 0.99);
  EXPECT_NEAR(lda.projection.col(0).norm(), 1.0, 1e-12);
}

TEST(LdaTest, MatchesGeneralizedEigenOracle) {
  std::mt19937_64 rng(4);
  const Toy t = Clusters(rng, oracle::RandomNormal(3, 4, rng, 2.0), 20, 0.7);
  const LdaStage lda = FitLda(t.rows, t.labels, 2);
  Eigen::MatrixXd sw, sb;
  ReferenceScatter(t.rows, t.labels, &sw, &sb);
  const double eps = kLdaRidge * sw.trace() / 4;
  const Eigen::MatrixXd b = sw + eps * Eigen::MatrixXd::Identity(4, 4);
  const Eigen::MatrixXd want = oracle::GeneralizedTopK(sb, b, 2);
  EXPECT_LT(oracle::MaxPrincipalAngle(lda.projection, want), 1e-6);
  // Leading direction individually, up to sign.
  EXPECT_GT(std::abs(lda.projection.col(0).dot(want.col(0))), 1 - 1e-10);
}

TEST(LdaTest, SingularWithinScatter) {
  Matrix x(6, 3);
  x << 1, 2, 0, 1, 2, 0, 1, 2, 0, -1, 0, 3, -1, 0, 3, -1, 0, 3;
  const std::vector<std::string> y = {"a", "a", "a", "b", "b", "b"};
  const LdaStage lda = FitLda(x, y, 1);
  ASSERT_TRUE(lda.projection.allFinite());
  const double pa = x.row(0).dot(lda.projection.col(0));
  const double pb = x.row(3).dot(lda.projection.col(0));
  EXPECT_GT(std::abs(pa - pb), 0.1);
  // Oracle: ridge falls back to the between-class trace.
  Eigen::MatrixXd sw, sb;
  ReferenceScatter(x, y, &sw, &sb);
  const Eigen::MatrixXd b =
      sw + kLdaRidge * sb.trace() / 3 * Eigen::MatrixXd::Identity(3, 3);
  const Eigen::MatrixXd want = oracle::GeneralizedTopK(sb, b, 1);
  EXPECT_LT(oracle::MaxPrincipalAngle(lda.projection, want), 1e-6);
}

TEST(LdaTest, ScaleInvariantAndSignFixed) {
  std::mt19937_64 rng(5);
  const Toy t = Clusters(rng, oracle::RandomNormal(4, 5, rng, 2.0), 15, 1.0);
  const LdaStage a = FitLda(t.rows, t.labels);
  const LdaStage b = FitLda(Matrix(t.rows * 37.5), t.labels);
  EXPECT_EQ(a.output_dim(), 3);
  EXPECT_LT((a.projection - b.projection).cwiseAbs().maxCoeff(), 1e-8);
  for (Eigen::Index c = 0; c < a.output_dim(); ++c) {
    Eigen::Index i = 0;
    while (std::abs(a.projection(i, c)) < 1e-12) ++i;
    EXPECT_GT(a.projection(i, c), 0);
  }
}

TEST(LdaTest, Errors) {
  Matrix x(4, 2);
  x << 1, 2, 3, 4, 5, 6, 7, 9;
  EXPECT_THROW(FitLda(x, {"a", "a", "a", "a"}), ContractError);
  EXPECT_THROW(FitLda(x, {"a", "a", "b", "b"}, 2), ContractError);
  EXPECT_THROW(FitLda(x, {"a", "b"}), ContractError);
  EmbeddingSet unlabeled = FromMatrix(x);
  EXPECT_THROW(FitLda(unlabeled), ContractError);
}

TEST(LengthNormTest, Examples) {
  Vector v(2);
  v << 3, 4;
  const Vector u = LengthNormalize(v);
  EXPECT_NEAR(u[0], 0.6, 1e-15);
  EXPECT_NEAR(u[1], 0.8, 1e-15);
  EXPECT_LT((LengthNormalize(u) - u).norm(), 1e-15);
  EXPECT_THROW(LengthNormalize(Vector::Zero(2)), ContractError);
}

TEST(PipelineTest, ApplyExamples) {
  Matrix a(1, 2);
  a << 3, 4;
  EXPECT_EQ(ApplyPipeline(Pipeline{}, a), a);
  Pipeline ln;
  ln.length_norm = true;
  EXPECT_LT((ApplyPipeline(ln, a) - (Matrix(1, 2) << 0.6, 0.8).finished())
                .norm(), 1e-15);
  Matrix b(2, 2);
  b << 2, 0, 0, 0;
  Pipeline cl;
  cl.center = FitCenter(b);
  cl.length_norm = true;
  const Matrix out = ApplyPipeline(cl, b);
  EXPECT_EQ(out, (Matrix(2, 2) << 1, 0, -1, 0).finished());
  Matrix wrong(1, 3);
  wrong << 1, 2, 3;
  EXPECT_THROW(ApplyPipeline(cl, wrong), ContractError);
}

TEST(PipelineTest, FittedPipelineProperties) {
  std::mt19937_64 rng(6);
  const Toy t = Clusters(rng, oracle::RandomNormal(5, 8, rng, 2.0), 30, 1.0);
  std::vector<std::string> ids;
  for (size_t i = 0; i < t.labels.size(); ++i) ids.push_back("u" + std::to_string(i));
  EmbeddingSet train = FromMatrix(t.rows, ids);
  for (size_t i = 0; i < ids.size(); ++i) train.SetLabel(ids[i], t.labels[i]);

  Pipeline no_norm = FitPipeline(train, {true, false, 0, false});
  const Matrix centered = ApplyPipeline(no_norm, train.ToMatrix());
  EXPECT_LT(centered.colwise().mean().cwiseAbs().maxCoeff(), 1e-10);

  const Pipeline p = FitPipeline(train, {});
  ASSERT_TRUE(p.center && p.lda && p.length_norm);
  EXPECT_EQ(p.lda->output_dim(), 4);
  const EmbeddingSet out = ApplyPipeline(p, train);
  ASSERT_EQ(out.size(), train.size());
  EXPECT_EQ(out.dim(), 4u);
  for (size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out[i].id, train[i].id);
    EXPECT_EQ(out.LabelOf(out[i].id), train.LabelOf(train[i].id));
    double n = 0;
    for (float v : out[i].vector) n += static_cast<double>(v) * v;
    EXPECT_NEAR(std::sqrt(n), 1.0, 1e-6);
  }
}

TEST(PipelineTest, SerializationRoundtrip) {
  std::mt19937_64 rng(7);
  const Toy t = Clusters(rng, oracle::RandomNormal(3, 6, rng, 2.0), 10, 1.0);
  Pipeline p;
  p.center = FitCenter(t.rows);
  p.lda = FitLda(t.rows, t.labels);
  p.length_norm = true;
  const auto dir = oracle::TempDir("pipeline");
  const std::string path = (dir / "p.svpl").string();
  SavePipeline(p, path);
  const Pipeline q = LoadPipeline(path);
  EXPECT_EQ(p, q);
  const Matrix probe = oracle::RandomNormal(20, 6, rng);
  EXPECT_EQ(ApplyPipeline(p, probe), ApplyPipeline(q, probe));

  EXPECT_TRUE(DecodePipeline(EncodePipeline(Pipeline{})).empty());
  const std::string bytes = EncodePipeline(p);
  for (size_t cut : {3u, 6u, 7u, 20u, static_cast<unsigned>(bytes.size() - 1)})
    EXPECT_THROW(DecodePipeline(bytes.substr(0, cut)), FormatError) << cut;
  std::string bad = bytes;
  bad[4] = 7;
  EXPECT_THROW(DecodePipeline(bad), FormatError);
}

}  // namespace
}  // namespace svkit
