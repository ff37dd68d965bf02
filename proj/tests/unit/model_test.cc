/*
 * Copyright 2026 The DPSketch Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "dpsketch/model.h"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstring>
#include <random>
#include <sstream>
#include <vector>

#include "dpsketch/count_sketch.h"
#include "dpsketch/errors.h"
#include "testing/oracles.h"

namespace dpsketch {
namespace {

Dataset RandomClassification(std::mt19937_64& rng, int64_t n, int64_t dim, int64_t classes) {
  Dataset d;
  d.input_dim = dim;
  d.num_classes = classes;
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int32_t> label(0, static_cast<int32_t>(classes - 1));
  for (int64_t i = 0; i < n * dim; ++i) d.features.push_back(normal(rng));
  for (int64_t i = 0; i < n; ++i) d.labels.push_back(label(rng));
  return d;
}

Dataset RandomRegression(std::mt19937_64& rng, int64_t n, int64_t dim) {
  Dataset d;
  d.input_dim = dim;
  std::normal_distribution<double> normal;
  for (int64_t i = 0; i < n * dim; ++i) d.features.push_back(normal(rng));
  for (int64_t i = 0; i < n; ++i) d.targets.push_back(normal(rng));
  return d;
}

ModelParams RandomParams(std::mt19937_64& rng, const Architecture& arch, double scale) {
  ModelParams p{arch, std::vector<double>(static_cast<size_t>(arch.ParameterCount()))};
  std::normal_distribution<double> normal(0.0, scale);
  for (double& v : p.values) v = normal(rng);
  return p;
}

void ExpectGradientMatchesFiniteDifferences(const ModelParams& params, const Batch& batch,
                                            const std::vector<int64_t>& coords) {
  const auto analytic = ComputeLossAndGradient(params, batch).gradient;
  const auto loss = [&](std::span<const double> w) {
    ModelParams p{params.arch, std::vector<double>(w.begin(), w.end())};
    return ComputeLoss(p, batch);
  };
  for (int64_t i : coords) {
    const double numeric = testing::CentralDifference(loss, params.values, i, 1e-6);
    const double a = analytic[static_cast<size_t>(i)];
    EXPECT_LE(std::abs(a - numeric), 1e-5 * std::max(std::abs(numeric), 1e-3))
        << ModelKindName(params.arch.kind) << " coordinate " << i << ": " << a << " vs "
        << numeric;
  }
}

TEST(ArchitectureTest, ParameterCounts) {
  EXPECT_EQ((Architecture{ModelKind::kLinearRegression, 7, 1, 0}.ParameterCount()), 8);
  EXPECT_EQ((Architecture{ModelKind::kLogisticRegression, 99, 10, 0}.ParameterCount()), 1000);
  EXPECT_EQ((Architecture{ModelKind::kMlp, 784, 10, 32}.ParameterCount()),
            32 * 785 + 10 * 33);
  EXPECT_THROW((Architecture{ModelKind::kLinearRegression, 3, 2, 0}.Validate()), ConfigError);
  EXPECT_THROW((Architecture{ModelKind::kMlp, 3, 2, 0}.Validate()), ConfigError);
}

TEST(ModelKindTest, Names) {
  for (ModelKind k : {ModelKind::kLinearRegression, ModelKind::kLogisticRegression,
                      ModelKind::kMlp}) {
    EXPECT_EQ(ParseModelKind(ModelKindName(k)), k);
  }
  EXPECT_THROW(ParseModelKind("resnet9"), ArgumentError);
}

TEST(LossTest, LinearRegressionIsStationaryAtLeastSquaresSolution) {
  std::mt19937_64 rng(1);
  const Dataset batch = RandomRegression(rng, 40, 5);
  Eigen::MatrixXd x(40, 6);
  Eigen::VectorXd y(40);
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 5; ++j) x(i, j) = batch.features[static_cast<size_t>(i * 5 + j)];
    x(i, 5) = 1.0;
    y(i) = batch.targets[static_cast<size_t>(i)];
  }
  const Eigen::VectorXd w = x.colPivHouseholderQr().solve(y);
  const ModelParams params{Architecture{ModelKind::kLinearRegression, 5, 1, 0},
                           std::vector<double>(w.data(), w.data() + 6)};
  for (double g : ComputeLossAndGradient(params, batch).gradient) EXPECT_NEAR(g, 0.0, 1e-10);
}

TEST(LossTest, LogisticAtZeroIsLogTwoOnBalancedBinaryBatch) {
  std::mt19937_64 rng(2);
  Dataset batch = RandomClassification(rng, 10, 4, 2);
  for (size_t i = 0; i < batch.labels.size(); ++i) batch.labels[i] = static_cast<int32_t>(i % 2);
  const Architecture arch{ModelKind::kLogisticRegression, 4, 2, 0};
  const ModelParams zero = InitializeModel(arch, 0);
  EXPECT_NEAR(ComputeLossAndGradient(zero, batch).loss, std::log(2.0), 1e-12);
}

TEST(GradientTest, MlpWidth32MatchesFiniteDifferences) {
  std::mt19937_64 rng(3);
  const Architecture arch{ModelKind::kMlp, 6, 3, 32};
  const Batch batch = RandomClassification(rng, 16, 6, 3);
  const ModelParams params = InitializeModel(arch, 4);
  std::uniform_int_distribution<int64_t> coord(0, arch.ParameterCount() - 1);
  std::vector<int64_t> coords;
  for (int i = 0; i < 10; ++i) coords.push_back(coord(rng));
  ExpectGradientMatchesFiniteDifferences(params, batch, coords);
}

TEST(GradientTest, AllKindsMatchFiniteDifferences) {
  std::mt19937_64 rng(5);
  for (int pair = 0; pair < 20; ++pair) {
    const int64_t dim = 2 + pair % 4;
    for (ModelKind kind : {ModelKind::kLinearRegression, ModelKind::kLogisticRegression,
                           ModelKind::kMlp}) {
      const bool regression = kind == ModelKind::kLinearRegression;
      const Architecture arch{kind, dim, regression ? 1 : 3, kind == ModelKind::kMlp ? 5 : 0};
      const Batch batch = regression ? RandomRegression(rng, 8, dim)
                                     : RandomClassification(rng, 8, dim, 3);
      const ModelParams params = RandomParams(rng, arch, 0.7);
      std::vector<int64_t> all(static_cast<size_t>(arch.ParameterCount()));
      for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int64_t>(i);
      ExpectGradientMatchesFiniteDifferences(params, batch, all);
    }
  }
}

TEST(GradientTest, SmallStepDecreasesLoss) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    for (ModelKind kind : {ModelKind::kLinearRegression, ModelKind::kLogisticRegression,
                           ModelKind::kMlp}) {
      const bool regression = kind == ModelKind::kLinearRegression;
      const Architecture arch{kind, 4, regression ? 1 : 3, kind == ModelKind::kMlp ? 8 : 0};
      const Batch batch = regression ? RandomRegression(rng, 12, 4)
                                     : RandomClassification(rng, 12, 4, 3);
      ModelParams params = RandomParams(rng, arch, 0.5);
      const auto lg = ComputeLossAndGradient(params, batch);
      std::vector<double> step(lg.gradient);
      for (double& v : step) v *= 1e-4;
      ApplyUpdate(params, step);
      EXPECT_LT(ComputeLoss(params, batch), lg.loss);
    }
  }
}

TEST(GradientTest, ShapeMismatchIsConfigError) {
  std::mt19937_64 rng(7);
  const ModelParams params = InitializeModel({ModelKind::kLogisticRegression, 4, 3, 0}, 0);
  EXPECT_THROW(ComputeLossAndGradient(params, RandomClassification(rng, 5, 3, 3)), ConfigError);
  EXPECT_THROW(ComputeLossAndGradient(params, RandomClassification(rng, 5, 4, 4)), ConfigError);
  EXPECT_THROW(ComputeLossAndGradient(params, RandomRegression(rng, 5, 4)), ConfigError);
  EXPECT_THROW(ComputeLossAndGradient(params, RandomClassification(rng, 0, 4, 3)), ConfigError);
}

TEST(InitTest, GlorotBoundsAndZeroBiases) {
  const Architecture arch{ModelKind::kMlp, 20, 4, 16};
  const ModelParams p = InitializeModel(arch, 9);
  const double hidden_bound = std::sqrt(6.0 / (20 + 16));
  const double out_bound = std::sqrt(6.0 / (16 + 4));
  size_t at = 0;
  for (int i = 0; i < 16 * 20; ++i) EXPECT_LE(std::abs(p.values[at++]), hidden_bound);
  for (int i = 0; i < 16; ++i) EXPECT_EQ(p.values[at++], 0.0);
  for (int i = 0; i < 4 * 16; ++i) EXPECT_LE(std::abs(p.values[at++]), out_bound);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(p.values[at++], 0.0);
  EXPECT_EQ(InitializeModel(arch, 9).values, p.values);
  for (double v : InitializeModel({ModelKind::kLogisticRegression, 5, 3, 0}, 9).values) {
    EXPECT_EQ(v, 0.0);
  }
}

TEST(ApplyUpdateTest, Examples) {
  std::mt19937_64 rng(8);
  const Architecture arch{ModelKind::kLogisticRegression, 3, 2, 0};
  ModelParams p = RandomParams(rng, arch, 1.0);
  const auto original = p.values;
  ApplyUpdate(p, TopKResult{});
  EXPECT_EQ(p.values, original);

  const TopKResult delta{{{2, 0.5}, {5, -1.25}}};
  ApplyUpdate(p, delta);
  EXPECT_EQ(p.values[2], original[2] - 0.5);
  EXPECT_EQ(p.values[5], original[5] + 1.25);
  EXPECT_EQ(p.values[0], original[0]);
  TopKResult negated = delta;
  for (auto& e : negated.entries) e.value = -e.value;
  ApplyUpdate(p, negated);
  EXPECT_EQ(p.values, original);

  EXPECT_THROW(ApplyUpdate(p, TopKResult{{{8, 1.0}}}), ArgumentError);
  EXPECT_THROW(ApplyUpdate(p, TopKResult{{{-1, 1.0}}}), ArgumentError);
}

TEST(ApplyUpdateTest, FullSparseDeltaEqualsSgdStep) {
  std::mt19937_64 rng(9);
  const Architecture arch{ModelKind::kLogisticRegression, 3, 2, 0};
  const Batch batch = RandomClassification(rng, 10, 3, 2);
  ModelParams sparse = RandomParams(rng, arch, 1.0);
  ModelParams dense = sparse;
  const auto g = ComputeLossAndGradient(sparse, batch).gradient;
  TopKResult delta;
  for (size_t i = 0; i < g.size(); ++i) delta.entries.push_back({static_cast<int64_t>(i), 0.1 * g[i]});
  ApplyUpdate(sparse, delta);
  for (size_t i = 0; i < g.size(); ++i) dense.values[i] -= 0.1 * g[i];
  EXPECT_EQ(sparse.values, dense.values);
}

TEST(AccuracyTest, PerfectClassifierOnSeparableSet) {
  Dataset d;
  d.input_dim = 2;
  d.num_classes = 2;
  d.features = {1, 0, 2, 0.5, 0, 1, -0.5, 3};
  d.labels = {0, 0, 1, 1};
  ModelParams p{{ModelKind::kLogisticRegression, 2, 2, 0}, {1, 0, 0, 1, 0, 0}};
  EXPECT_EQ(EvaluateAccuracy(p, d), 1.0);
}

TEST(AccuracyTest, ConstantPredictorOnRandomLabels) {
  std::mt19937_64 rng(10);
  const Dataset d = RandomClassification(rng, 10000, 3, 10);
  const ModelParams zero = InitializeModel({ModelKind::kLogisticRegression, 3, 10, 0}, 0);
  for (int32_t y : Predict(zero, d)) ASSERT_EQ(y, 0);
  EXPECT_NEAR(EvaluateAccuracy(zero, d), 0.1, 0.02);
}

TEST(AccuracyTest, AgreementEverywhereIsOne) {
  std::mt19937_64 rng(11);
  Dataset d = RandomClassification(rng, 200, 4, 5);
  const ModelParams p = RandomParams(rng, {ModelKind::kMlp, 4, 5, 6}, 1.0);
  const auto predicted = Predict(p, d);
  d.labels = predicted;
  EXPECT_EQ(EvaluateAccuracy(p, d), 1.0);
}

TEST(CheckpointTest, RoundTripIsBitwise) {
  std::mt19937_64 rng(12);
  for (const Architecture& arch :
       {Architecture{ModelKind::kLinearRegression, 5, 1, 0},
        Architecture{ModelKind::kLogisticRegression, 5, 4, 0},
        Architecture{ModelKind::kMlp, 5, 4, 7}}) {
    ModelParams p = RandomParams(rng, arch, 3.0);
    p.values[0] = -0.0;
    std::stringstream buffer;
    WriteCheckpoint(p, buffer);
    EXPECT_EQ(buffer.str().size(), 8u + 5 * 8u + 8u * p.values.size());
    EXPECT_EQ(buffer.str().substr(0, 8), "DPSKCKPT");
    const ModelParams back = ReadCheckpoint(buffer);
    EXPECT_EQ(back.arch, p.arch);
    ASSERT_EQ(back.values.size(), p.values.size());
    EXPECT_EQ(0, std::memcmp(back.values.data(), p.values.data(), 8 * p.values.size()));
  }
}

TEST(CheckpointTest, RejectsCorruptInput) {
  std::stringstream bad("NOTACKPT");
  EXPECT_THROW(ReadCheckpoint(bad), IngestError);
  const ModelParams p = InitializeModel({ModelKind::kLogisticRegression, 2, 2, 0}, 0);
  std::stringstream buffer;
  WriteCheckpoint(p, buffer);
  std::string bytes = buffer.str();
  bytes.pop_back();
  std::stringstream truncated(bytes);
  EXPECT_THROW(ReadCheckpoint(truncated), IngestError);
}

}  // namespace
}  // namespace dpsketch
