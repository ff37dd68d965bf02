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

#include "dpsketch/selftest.h"

#include <cmath>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dpsketch/clipping.h"
#include "dpsketch/count_sketch.h"
#include "dpsketch/data_ingest.h"
#include "dpsketch/federated.h"
#include "dpsketch/privacy.h"
#include "dpsketch/random.h"

namespace dpsketch {
namespace {

std::vector<double> RandomVector(Rng& rng, int64_t d) {
  std::normal_distribution<double> normal;
  std::vector<double> g(static_cast<size_t>(d));
  for (double& v : g) v = normal(rng);
  return g;
}

std::string CheckSketchLinearity() {
  Rng rng(11);
  SketchConfig config{.rows = 5, .columns = 64, .master_seed = 3, .dimension = 200};
  for (int trial = 0; trial < 50; ++trial) {
    const auto g1 = RandomVector(rng, config.dimension);
    const auto g2 = RandomVector(rng, config.dimension);
    const double a = std::normal_distribution<double>()(rng);
    const double b = std::normal_distribution<double>()(rng);
    std::vector<double> combined(g1.size());
    for (size_t i = 0; i < g1.size(); ++i) combined[i] = a * g1[i] + b * g2[i];
    CountSketch lhs = Scale(SketchOf(config, g1), a);
    lhs.AddScaled(SketchOf(config, g2), b);
    const CountSketch rhs = SketchOf(config, combined);
    for (size_t c = 0; c < lhs.counters().size(); ++c) {
      if (std::abs(lhs.counters()[c] - rhs.counters()[c]) > 1e-9) {
        return "cell " + std::to_string(c) + " differs in trial " + std::to_string(trial);
      }
    }
  }
  return {};
}

std::string CheckSketchDeterminism() {
  Rng rng(12);
  SketchConfig config{.rows = 3, .columns = 16, .master_seed = 9, .dimension = 100};
  const auto g = RandomVector(rng, config.dimension);
  if (!(SketchOf(config, g) == SketchOf(config, g))) return "counters differ";
  const CountSketch s = SketchOf(config, g);
  if (!(CountSketch::Deserialize(s.Serialize()) == s)) return "serialization round trip";
  return {};
}

std::string CheckPrivacyRoundTrip() {
  for (double eps : {0.5, 1.0, 2.0, 4.0, 8.0, 10.0}) {
    for (double delta : {1e-5, 1e-6}) {
      const double back = EpsilonFromRho(RhoFromEpsilon(eps, delta), delta);
      if (std::abs(back - eps) > 1e-9 * eps) {
        return "epsilon " + std::to_string(eps) + " round trip off";
      }
    }
  }
  return {};
}

std::string CheckCalibration() {
  for (double c : {0.1, 1.5, 7.0}) {
    for (int64_t l : {1, 5, 9}) {
      for (double rho : {1e-3, 0.3, 50.0}) {
        const NoiseSpec spec = CalibrateSketchNoise(c, l, rho);
        const double lhs = spec.sigma * spec.sigma * 2.0 * spec.rho;
        const double rhs = spec.sensitivity * spec.sensitivity;
        if (std::abs(lhs - rhs) > 1e-12 * rhs) return "sigma^2 2 rho != sensitivity^2";
      }
    }
  }
  return {};
}

std::string CheckAccountant() {
  PrivacyAccountant accountant(1.0, 0.01, 0.0, BitAccounting::kStrict);
  for (int i = 0; i < 100; ++i) accountant.Spend(0.01);
  if (std::abs(accountant.rho_spent() - 1.0) > 1e-12) return "sum not conserved";
  if (accountant.CanSpend(1e-6)) return "overspend accepted";
  return {};
}

std::string CheckClipContract() {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = RandomVector(rng, 30);
    const double c = 0.5 + trial * 0.1;
    const auto clipped = Clip(g, c);
    if (L2Norm(clipped) > c * (1.0 + 1e-12)) return "norm exceeds C";
    if (L2Norm(g) <= c && clipped != g) return "short gradient modified";
  }
  return {};
}

std::string CheckZeroNoiseDegeneracy() {
  SyntheticOptions options;
  options.num_samples = 300;
  options.input_dim = 6;
  options.num_classes = 3;
  options.seed = 5;
  const Dataset data = Synthesize(options);
  const ClientPartition partition = Partition(data, 10, PartitionKind::kIid, 0.5, 6);
  RunConfig config;
  config.rounds = 8;
  config.clients_per_round = 4;
  config.total_clients = 10;
  config.batch_size = 8;
  config.topk = 6;
  config.sketch_rows = 3;
  config.sketch_columns = 16;
  config.seed = 7;
  config.variant = Variant::kDpsfl;
  config.noise_scale = 0.0;
  const RunResult silent = Run(config, data, partition, data);
  config.variant = Variant::kDpsflNonNoise;
  const RunResult plain = Run(config, data, partition, data);
  if (silent.final_model.values != plain.final_model.values) return "models differ";
  return {};
}

}  // namespace

std::vector<SelfTestResult> RunSelfTests() {
  const std::vector<std::pair<std::string, std::function<std::string()>>> checks = {
      {"sketch linearity", CheckSketchLinearity},
      {"sketch determinism", CheckSketchDeterminism},
      {"epsilon/rho round trip", CheckPrivacyRoundTrip},
      {"noise calibration identity", CheckCalibration},
      {"accountant conservation", CheckAccountant},
      {"clip contract", CheckClipContract},
      {"zero-noise degeneracy", CheckZeroNoiseDegeneracy},
  };
  std::vector<SelfTestResult> results;
  for (const auto& [name, check] : checks) {
    SelfTestResult result;
    result.name = name;
    try {
      result.detail = check();
      result.passed = result.detail.empty();
    } catch (const std::exception& e) {
      result.detail = e.what();
    }
    results.push_back(std::move(result));
  }
  return results;
}

}  // namespace dpsketch
