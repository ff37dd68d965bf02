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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. Tolerances and run-time limits are
// fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpsketch/clipping.h"
#include "dpsketch/count_sketch.h"
#include "dpsketch/errors.h"
#include "dpsketch/experiment.h"
#include "dpsketch/federated.h"
#include "dpsketch/privacy.h"
#include "dpsketch/random.h"
#include "testing/oracles.h"

namespace dpsketch {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double time_limit_s;
  std::function<Outcome()> check;
};

std::string Format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

std::vector<double> Gaussian(Rng& rng, int64_t n, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<double> v(static_cast<size_t>(n));
  for (double& x : v) x = normal(rng);
  return v;
}

// 1. a S(g1) + b S(g2) = S(a g1 + b g2) cell for cell.
Outcome SketchLinearity() {
  constexpr int64_t kDim = 1000;
  constexpr double kTolerance = 1e-9;
  Rng rng(101);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const SketchConfig config{5, 64, rng(), kDim};
    const auto g1 = Gaussian(rng, kDim);
    const auto g2 = Gaussian(rng, kDim);
    const double a = coef(rng);
    const double b = coef(rng);
    CountSketch lhs = Scale(SketchOf(config, g1), a);
    lhs.AddScaled(SketchOf(config, g2), b);
    std::vector<double> combined(kDim);
    for (size_t i = 0; i < combined.size(); ++i) combined[i] = a * g1[i] + b * g2[i];
    const CountSketch rhs = SketchOf(config, combined);
    for (size_t c = 0; c < lhs.counters().size(); ++c) {
      worst = std::max(worst, std::abs(lhs.counters()[c] - rhs.counters()[c]));
    }
  }
  return {worst <= kTolerance, Format("max cell error %.3g over 1000 instances (tol %g)", worst,
                                      kTolerance)};
}

// 2. Planted heavy coordinates survive top-k unsketching at the sketch size
// from SizeForHeavyRecovery.
Outcome HeavyRecovery() {
  constexpr double kTau = 0.05;
  constexpr int64_t kDim = 10000;
  constexpr double kDeltaS = 0.01;
  constexpr int kHeavy = 5;
  constexpr int kTrials = 1000;
  constexpr double kRequired = 0.98;
  const SketchShape shape = SizeForHeavyRecovery(kTau, kDim, kDeltaS);
  const auto k = static_cast<int64_t>(std::ceil(1.0 / kTau));
  Rng rng(202);
  std::uniform_int_distribution<int64_t> pick(0, kDim - 1);
  int recovered = 0;
  for (int trial = 0; trial < kTrials; ++trial) {
    const SketchConfig config{shape.rows, shape.columns, rng(), kDim};
    std::vector<double> g = Gaussian(rng, kDim);
    std::set<int64_t> planted;
    while (static_cast<int>(planted.size()) < kHeavy) planted.insert(pick(rng));
    double light = 0.0;
    for (size_t i = 0; i < g.size(); ++i) {
      if (!planted.contains(static_cast<int64_t>(i))) light += g[i] * g[i];
    }
    // h^2 = tau * (light + kHeavy h^2): each planted coordinate sits exactly
    // at the heaviness threshold.
    const double h = std::sqrt(kTau * light / (1.0 - kHeavy * kTau));
    for (int64_t i : planted) g[static_cast<size_t>(i)] = (rng() & 1) ? h : -h;
    const auto got = SketchOf(config, g).UnsketchTopK(k).Indices();
    const std::set<int64_t> found(got.begin(), got.end());
    recovered += std::all_of(planted.begin(), planted.end(),
                             [&](int64_t i) { return found.contains(i); });
  }
  const double rate = static_cast<double>(recovered) / kTrials;
  return {rate >= kRequired,
          Format("(l, m) = (%lld, %lld), k = %lld, %d planted at threshold: %d/%d trials "
                 "recovered all (need %.0f%%)",
                 static_cast<long long>(shape.rows), static_cast<long long>(shape.columns),
                 static_cast<long long>(k), kHeavy, recovered, kTrials, 100 * kRequired)};
}

// 3. Closed forms of the accountant.
Outcome AccountantClosedForms() {
  constexpr double kRoundTripTol = 1e-9;
  constexpr double kCalibrationTol = 1e-12;
  double worst_round_trip = 0.0;
  for (double eps : {0.5, 1.0, 2.0, 4.0, 8.0, 10.0}) {
    for (double delta : {1e-5, 1e-6}) {
      const double back = EpsilonFromRho(RhoFromEpsilon(eps, delta), delta);
      worst_round_trip = std::max(worst_round_trip, std::abs(back - eps) / eps);
    }
  }
  double worst_calibration = 0.0;
  for (double clip : {0.01, 0.15, 1.5, 20.0}) {
    for (int64_t rows : {1, 5, 7, 20}) {
      for (double rho : {1e-4, 1e-3, 0.3, 5.0}) {
        const NoiseSpec spec = CalibrateSketchNoise(clip, rows, rho);
        const double lhs = spec.sigma * spec.sigma * 2.0 * rho;
        const double rhs = spec.sensitivity * spec.sensitivity;
        worst_calibration = std::max(worst_calibration, std::abs(lhs - rhs) / rhs);
      }
    }
  }
  // Conservation: the ledger equals the in-order sum of the accepted spends.
  Rng rng(303);
  std::uniform_real_distribution<double> cost(0.0, 0.05);
  std::uniform_int_distribution<int> length(1, 200);
  int violations = 0;
  for (int seq = 0; seq < 10000; ++seq) {
    PrivacyAccountant accountant(1.0, 0.0, 0.0, BitAccounting::kStrict);
    double expected = 0.0;
    const int n = length(rng);
    for (int i = 0; i < n; ++i) {
      const double c = cost(rng);
      if (accountant.CanSpend(c)) {
        accountant.Spend(c);
        expected += c;
      } else {
        try {
          accountant.Spend(c);
          ++violations;
        } catch (const BudgetExhaustedError&) {
        }
      }
    }
    if (accountant.rho_spent() != expected) ++violations;
  }
  const bool ok = worst_round_trip <= kRoundTripTol && worst_calibration <= kCalibrationTol &&
                  violations == 0;
  return {ok, Format("round trip %.2g (tol %g), calibration %.2g (tol %g), %d conservation "
                     "violations in 10000 sequences",
                     worst_round_trip, kRoundTripTol, worst_calibration, kCalibrationTol,
                     violations)};
}

struct SmallProblem {
  Dataset train;
  Dataset test;
  ClientPartition partition;
};

SmallProblem MakeSmallProblem(int64_t input_dim, int64_t clients, uint64_t seed) {
  SyntheticOptions options;
  options.num_samples = 1200;
  options.input_dim = input_dim;
  options.num_classes = 2;
  options.separation = 3.0;
  options.seed = seed;
  const TrainTestSplit split = SplitTrainTest(Synthesize(options), 0.2, seed + 1);
  return {split.train, split.test,
          Partition(split.train, clients, PartitionKind::kIid, 0.5, seed + 2)};
}

// Momentum SGD on clipped, client-averaged gradients, using the run's
// documented sampling streams.
std::vector<std::vector<double>> ClippedMomentumSgd(const RunConfig& config,
                                                    const SmallProblem& p,
                                                    ModelParams model) {
  std::vector<std::vector<double>> trajectory;
  std::vector<double> u(model.values.size(), 0.0);
  for (int64_t t = 0; t < config.rounds; ++t) {
    const auto round = static_cast<uint64_t>(t);
    std::vector<int64_t> all(static_cast<size_t>(config.total_clients));
    std::iota(all.begin(), all.end(), 0);
    std::vector<int64_t> picked;
    Rng pick_rng(DeriveSeed(config.seed, {kTagSampling, round}));
    std::sample(all.begin(), all.end(), std::back_inserter(picked), config.clients_per_round,
                pick_rng);
    std::vector<double> mean(u.size(), 0.0);
    for (int64_t client : picked) {
      const auto& rows = p.partition.clients[static_cast<size_t>(client)];
      std::vector<int64_t> batch_rows;
      if (static_cast<int64_t>(rows.size()) <= config.batch_size) {
        batch_rows = rows;
      } else {
        Rng batch_rng(DeriveSeed(config.seed, {kTagBatch, round, static_cast<uint64_t>(client)}));
        std::sample(rows.begin(), rows.end(), std::back_inserter(batch_rows), config.batch_size,
                    batch_rng);
      }
      auto g = ComputeLossAndGradient(model, p.train.Subset(batch_rows)).gradient;
      double norm = 0.0;
      for (double v : g) norm += v * v;
      norm = std::sqrt(norm);
      const double scale = 1.0 / std::max(1.0, norm / config.clipping.threshold);
      for (size_t i = 0; i < g.size(); ++i) {
        mean[i] += g[i] * scale / static_cast<double>(config.clients_per_round);
      }
    }
    for (size_t i = 0; i < u.size(); ++i) {
      u[i] = config.momentum * u[i] + mean[i];
      model.values[i] -= config.learning_rate * u[i];
    }
    trajectory.push_back(model.values);
  }
  return trajectory;
}

// 4. Degeneracy chain.
Outcome DegeneracyChain() {
  constexpr double kTrajectoryTol = 1e-6;
  // Zero noise against the noiseless variant, prefix by prefix.
  const SmallProblem p = MakeSmallProblem(20, 10, 404);
  RunConfig base;
  base.rounds = 20;
  base.clients_per_round = 4;
  base.total_clients = 10;
  base.batch_size = 16;
  base.topk = 6;
  base.sketch_rows = 3;
  base.sketch_columns = 16;
  base.learning_rate = 0.1;
  base.seed = 41;
  int mismatched_rounds = 0;
  for (int64_t t = 1; t <= base.rounds; ++t) {
    RunConfig silent = base;
    silent.rounds = t;
    silent.budget_rounds = base.rounds;
    silent.variant = Variant::kDpsfl;
    silent.noise_scale = 0.0;
    RunConfig plain = silent;
    plain.variant = Variant::kDpsflNonNoise;
    const RunResult a = Run(silent, p.train, p.partition, p.test);
    const RunResult b = Run(plain, p.train, p.partition, p.test);
    const bool same = a.final_model.values == b.final_model.values &&
                      a.records.back().loss == b.records.back().loss;
    mismatched_rounds += !same;
  }

  // Collision-free sketch with k = d against clipped momentum SGD.
  const SmallProblem q = MakeSmallProblem(15, 10, 405);  // d = 2 * 16 = 32
  RunConfig wide = base;
  wide.variant = Variant::kDpsflNonNoise;
  wide.rounds = 50;
  wide.topk = 32;
  wide.sketch_rows = 7;
  wide.sketch_columns = 4096;
  wide.clipping.threshold = 0.5;
  const Architecture arch = ArchitectureFor(wide, q.train);
  const auto oracle =
      ClippedMomentumSgd(wide, q, InitializeModel(arch, DeriveSeed(wide.seed, {kTagInit})));
  double worst = 0.0;
  for (int64_t t = 1; t <= wide.rounds; ++t) {
    RunConfig prefix = wide;
    prefix.rounds = t;
    const RunResult r = Run(prefix, q.train, q.partition, q.test);
    const auto& expected = oracle[static_cast<size_t>(t - 1)];
    for (size_t i = 0; i < expected.size(); ++i) {
      worst = std::max(worst, std::abs(r.final_model.values[i] - expected[i]));
    }
  }
  return {mismatched_rounds == 0 && worst <= kTrajectoryTol,
          Format("sigma=0 vs noiseless: %d/20 prefixes differ bitwise; k=d (l=7, m=4096, d=%lld) "
                 "vs momentum SGD: max deviation %.3g over 50 rounds (tol %g)",
                 mismatched_rounds, static_cast<long long>(arch.ParameterCount()), worst,
                 kTrajectoryTol)};
}

// Shared setup of criteria 5 and 6: logistic regression on two Gaussian
// blobs with d = 2 * (499 + 1) = 1000 parameters.
constexpr const char* kConvergenceSetup = R"(
rounds: 300
seed: 2026
clients: {total: 50, per_round: 10}
optimizer: {learning_rate: 0.02, momentum: 0.5, batch_size: 32}
sketch: {rows: 1, columns: 50, k: 1}
clipping: {C: 1.5}
privacy: {epsilon: 4, delta: 1e-5}
model: {kind: logistic}
dataset: {kind: blobs, samples: 5000, input_dim: 499, classes: 2, separation: 30, noise: 1, seed: 7}
partition: {kind: iid}
repetitions: 10
)";

struct PairedResult {
  std::vector<double> a;
  std::vector<double> b;
  int wins = 0;  // repetitions with a >= b
};

// Runs two variants of the setup over the same repetition seeds.
PairedResult ComparePaired(const std::string& yaml_a, const std::string& yaml_b) {
  const ExperimentSpec spec_a = ParseConfigText(yaml_a, "setup-a");
  const ExperimentSpec spec_b = ParseConfigText(yaml_b, "setup-b");
  const PreparedData data = PrepareData(spec_a.dataset);
  const auto runs_a = MaterializeRuns(spec_a, false);
  const auto runs_b = MaterializeRuns(spec_b, false);
  PairedResult out;
  for (size_t r = 0; r < runs_a.size(); ++r) {
    const auto final_accuracy = [&](const ExperimentSpec& s) {
      const ClientPartition partition =
          Partition(data.train, s.run.total_clients, s.partition.kind, s.partition.alpha,
                    DeriveSeed(s.run.seed, {kTagPartition}));
      return *Run(s.run, data.train, partition, data.test).records.back().accuracy;
    };
    out.a.push_back(final_accuracy(runs_a[r].spec));
    out.b.push_back(final_accuracy(runs_b[r].spec));
    out.wins += out.a.back() >= out.b.back();
  }
  return out;
}

double Mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// 5. DPSFL against dense-noise DPFL.
Outcome Convergence() {
  constexpr int kRequiredWins = 8;
  const std::string setup = kConvergenceSetup;
  const PairedResult r = ComparePaired(setup + "variant: dpsfl\n", setup + "variant: dpfl\n");
  return {r.wins >= kRequiredWins,
          Format("DPSFL >= DPFL in %d/10 repetitions (need %d); mean final accuracy %.3f vs "
                 "%.3f",
                 r.wins, kRequiredWins, Mean(r.a), Mean(r.b))};
}

// 6. Adaptive clipping.
Outcome AdaptiveClipping() {
  // Controller on a stationary stream: gradient norms are log-normal with
  // median 1 and log-scale 0.5, directions uniform.
  constexpr double kTolerance = 0.05;
  constexpr int64_t kDim = 100;
  constexpr int kClients = 50;
  constexpr int kRounds = 500;
  constexpr int kWindow = 100;
  ClippingState state;
  state.threshold = 1.5;
  state.eta_c = 0.05;
  Rng rng(606);
  std::lognormal_distribution<double> norm(0.0, 0.5);
  std::vector<int64_t> topk(10);
  std::iota(topk.begin(), topk.end(), 0);
  int64_t ones = 0;
  int64_t released = 0;
  for (int t = 0; t < kRounds; ++t) {
    std::vector<ClipImpactBit> bits;
    for (int c = 0; c < kClients; ++c) {
      auto g = Gaussian(rng, kDim);
      const double scale = norm(rng) / L2Norm(g);
      for (double& v : g) v *= scale;
      bits.push_back(*ComputeClipImpactBit(g, state.threshold, topk, state.theta, state.sigma_b,
                                           rng()));
    }
    if (t >= kRounds - kWindow) {
      for (const auto& b : bits) ones += b.raw;
      released += static_cast<int64_t>(bits.size());
    }
    state = UpdateThreshold(state, AggregateBits(bits));
  }
  const double empirical = static_cast<double>(ones) / static_cast<double>(released);
  const bool controller_ok = std::abs(empirical - state.gamma) <= kTolerance;

  // DPSFL-AC against DPSFL, both starting from a threshold 10x too small.
  // Bit releases are reported but not charged (legacy accounting): charged
  // at sigma_b = 0.1 they alone exceed the whole budget.
  constexpr int kRequiredWins = 7;
  std::string base = kConvergenceSetup;
  base.replace(base.find("clipping: {C: 1.5}"), 18, "clipping: {C: 0.15}");
  base.replace(base.find("privacy: {epsilon: 4, delta: 1e-5}"), 34,
               "privacy: {epsilon: 4, delta: 1e-5, bit_accounting: legacy}");
  const PairedResult r = ComparePaired(base + "variant: dpsfl-ac\n", base + "variant: dpsfl\n");
  const bool ac_ok = r.wins >= kRequiredWins;
  return {controller_ok && ac_ok,
          Format("controller: Pr[bit=1] = %.3f over the last %d rounds, target %.2f (tol %.2f), "
                 "C = %.4f; C0 = 0.15: DPSFL-AC >= DPSFL in %d/10 (need %d), mean %.3f vs %.3f",
                 empirical, kWindow, state.gamma, kTolerance, state.threshold, r.wins,
                 kRequiredWins, Mean(r.a), Mean(r.b))};
}

// 7. Bytes against hand-computed values.
Outcome CommunicationAccounting() {
  constexpr double kClTolerance = 1e-12;
  const SmallProblem p = MakeSmallProblem(20, 10, 707);  // d = 42
  RunConfig c;
  c.variant = Variant::kDpsflAc;
  c.bit_accounting = BitAccounting::kLegacy;
  c.rounds = 12;
  c.clients_per_round = 4;
  c.total_clients = 10;
  c.topk = 7;
  c.sketch_rows = 3;
  c.sketch_columns = 25;
  c.seed = 71;
  const RunResult r = Run(c, p.train, p.partition, p.test);
  int byte_mismatches = 0;
  double worst_cl = 0.0;
  double cumulative = 0.0;
  for (const auto& rec : r.records) {
    // Per client: 32-byte header + 8 bytes per counter, plus an 8-byte bit
    // from round 1 on; down: k entries of 4-byte index + 8-byte value.
    const int64_t up = 4 * (32 + 8 * 3 * 25 + (rec.round > 0 ? 8 : 0));
    const int64_t down = 4 * 7 * 12;
    byte_mismatches += rec.bytes_up != up || rec.bytes_down != down;
    cumulative += static_cast<double>(up + down);
    const double baseline = static_cast<double>(rec.round + 1) * 4.0 * 16.0 * 42.0;
    worst_cl = std::max(worst_cl,
                        std::abs(rec.compression_level - baseline / cumulative) / (baseline / cumulative));
  }
  const bool ok = r.records.size() == 12 && byte_mismatches == 0 && worst_cl <= kClTolerance &&
                  r.metadata.total_bytes == static_cast<int64_t>(cumulative);
  return {ok, Format("%d/12 rounds with byte mismatches; CL max relative error %.2g (tol %g)",
                     byte_mismatches, worst_cl, kClTolerance)};
}

// 8. Counter noise is N(0, sigma^2).
Outcome NoiseDistribution() {
  constexpr double kSignificance = 0.01;
  std::string detail;
  bool ok = true;
  const SketchConfig config{5, 20000, 8, 100};  // 10^5 counters
  for (double rho : {0.001, 0.05, 2.0}) {
    const NoiseSpec spec = CalibrateSketchNoise(1.5, config.rows, rho);
    CountSketch sketch(config);
    AddGaussianNoise(sketch, spec, DeriveSeed(808, {static_cast<uint64_t>(rho * 1e6)}));
    const std::vector<double> samples(sketch.counters().begin(), sketch.counters().end());
    const auto ks = testing::KolmogorovSmirnov(
        samples, [&](double x) { return testing::NormalCdf(x / spec.sigma); });
    ok = ok && ks.p_value > kSignificance;
    detail += Format("%ssigma %.4g: D = %.4f, p = %.3f", detail.empty() ? "" : "; ", spec.sigma,
                     ks.statistic, ks.p_value);
  }
  return {ok, detail + Format(" (n = 100000 each, alpha = %g)", kSignificance)};
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 9. Two CLI invocations give byte-identical records.
Outcome EndToEndDeterminism(const std::string& cli) {
  if (cli.empty()) return {false, "no CLI path given (--cli)"};
  const fs::path dir = fs::temp_directory_path() / "dpsketch_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream config(dir / "config.yaml");
    config << "variant: dpsfl-ac\nrounds: 60\nclients: {total: 20, per_round: 5}\n"
              "sketch: {rows: 3, columns: 64, k: 8}\n"
              "privacy: {bit_accounting: legacy}\n"
              "dataset: {kind: blobs, samples: 1000, input_dim: 20, classes: 4}\n";
  }
  std::string detail;
  for (const char* out : {"a", "b"}) {
    const std::string command = "\"" + cli + "\" run --config \"" + (dir / "config.yaml").string() +
                                "\" --seed 99 --out \"" + (dir / out).string() + "\" > \"" +
                                (dir / (std::string(out) + ".log")).string() + "\" 2>&1";
    if (const int status = std::system(command.c_str()); status != 0) {
      return {false, Format("run exited with status %d: %s", status,
                            ReadFile(dir / (std::string(out) + ".log")).c_str())};
    }
  }
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir / "a" / "runs")) {
    if (entry.path().extension() == ".jsonl") names.push_back(entry.path().filename().string());
  }
  int differing = 0;
  for (const auto& name : names) {
    const std::string a = ReadFile(dir / "a" / "runs" / name);
    differing += a.empty() || a != ReadFile(dir / "b" / "runs" / name);
  }
  const bool ok = !names.empty() && differing == 0;
  const std::string summary =
      Format("%zu record file(s), %d differ", names.size(), differing);
  fs::remove_all(dir);
  return {ok, summary};
}

}  // namespace
}  // namespace dpsketch

int main(int argc, char** argv) {
  using dpsketch::Criterion;
  CLI::App app{"dpsketch acceptance suite"};
  std::string cli;
  std::vector<int> only;
  app.add_option("--cli", cli, "path to the dpsfl executable (criterion 9)");
  app.add_option("--only", only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "sketch linearity", 10, dpsketch::SketchLinearity},
      {2, "heavy-coordinate recovery", 120, dpsketch::HeavyRecovery},
      {3, "privacy accountant closed forms", 5, dpsketch::AccountantClosedForms},
      {4, "degeneracy chain", 60, dpsketch::DegeneracyChain},
      {5, "convergence against dense-noise DPFL", 600, dpsketch::Convergence},
      {6, "adaptive clipping", 900, dpsketch::AdaptiveClipping},
      {7, "communication accounting", 1, dpsketch::CommunicationAccounting},
      {8, "noise distribution", 10, dpsketch::NoiseDistribution},
      {9, "end-to-end determinism", 120, [&] { return dpsketch::EndToEndDeterminism(cli); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    dpsketch::Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("error: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds <= c.time_limit_s;
    const bool passed = outcome.passed && in_time;
    failed += !passed;
    std::printf("%s %d %s: %s [%.2f s, limit %.0f s%s]\n", passed ? "PASS" : "FAIL", c.id,
                c.title.c_str(), outcome.detail.c_str(), seconds, c.time_limit_s,
                in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
