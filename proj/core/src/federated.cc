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

#include "dpsketch/federated.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dpsketch/errors.h"
#include "dpsketch/random.h"

namespace dpsketch {
namespace {

constexpr uint64_t kTagSketchHash = 0x48415348;

template <typename T>
void RequirePositive(T value, const char* name) {
  if (!(value > T{0})) {
    throw ConfigError(std::string(name) + " must be positive");
  }
}

Batch DrawBatch(const Dataset& train, const std::vector<int64_t>& rows,
                int64_t batch_size, uint64_t seed) {
  if (static_cast<int64_t>(rows.size()) <= batch_size) {
    return train.Subset(rows);
  }
  std::vector<int64_t> picked;
  picked.reserve(static_cast<size_t>(batch_size));
  Rng rng(seed);
  std::sample(rows.begin(), rows.end(), std::back_inserter(picked), batch_size,
              rng);
  return train.Subset(picked);
}

}  // namespace

std::string_view VariantName(Variant variant) {
  switch (variant) {
    case Variant::kFedAvg:
      return "fedavg";
    case Variant::kDpfl:
      return "dpfl";
    case Variant::kFetchSgd:
      return "fetchsgd";
    case Variant::kDpsflNonNoise:
      return "dpsfl-nonnoise";
    case Variant::kDpsfl:
      return "dpsfl";
    case Variant::kDpsflAc:
      return "dpsfl-ac";
  }
  return "unknown";
}

Variant ParseVariant(std::string_view name) {
  for (Variant v : {Variant::kFedAvg, Variant::kDpfl, Variant::kFetchSgd,
                    Variant::kDpsflNonNoise, Variant::kDpsfl,
                    Variant::kDpsflAc}) {
    if (VariantName(v) == name) return v;
  }
  throw ArgumentError("unknown variant '" + std::string(name) +
                      "' (expected fedavg, dpfl, fetchsgd, dpsfl-nonnoise, "
                      "dpsfl or dpsfl-ac)");
}

bool UsesSketch(Variant variant) {
  return variant != Variant::kFedAvg && variant != Variant::kDpfl;
}

bool ClipsGradients(Variant variant) {
  return variant != Variant::kFedAvg && variant != Variant::kFetchSgd;
}

bool IsPrivate(Variant variant) {
  return variant == Variant::kDpfl || variant == Variant::kDpsfl ||
         variant == Variant::kDpsflAc;
}

bool EmitsClipBits(Variant variant) { return variant == Variant::kDpsflAc; }

void RunConfig::Validate() const {
  if (rounds < 0) throw ConfigError("rounds must be >= 0");
  RequirePositive(clients_per_round, "clients_per_round");
  RequirePositive(total_clients, "total_clients");
  if (clients_per_round > total_clients) {
    throw ConfigError("clients_per_round (" + std::to_string(clients_per_round) +
                      ") exceeds total_clients (" +
                      std::to_string(total_clients) + ")");
  }
  RequirePositive(batch_size, "batch_size");
  RequirePositive(learning_rate, "learning_rate");
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw ConfigError("momentum must lie in [0, 1)");
  }
  RequirePositive(clipping.threshold, "clipping.C");
  if (!(clipping.gamma > 0.0 && clipping.gamma < 1.0)) {
    throw ConfigError("clipping.gamma must lie in (0, 1)");
  }
  RequirePositive(clipping.theta, "clipping.theta");
  RequirePositive(clipping.eta_c, "clipping.eta_C");
  if (!(clipping.sigma_b >= 0.0)) throw ConfigError("clipping.sigma_b must be >= 0");
  if (UsesSketch(variant)) {
    RequirePositive(topk, "sketch.k");
    if (sketch_rows < 1) throw ConfigError("sketch.rows must be >= 1");
    if (sketch_columns < 2) throw ConfigError("sketch.columns must be >= 2");
  }
  RequirePositive(epsilon, "privacy.epsilon");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ConfigError("privacy.delta must lie in (0, 1)");
  }
  if (budget_rounds < 0) throw ConfigError("privacy.budget_rounds must be >= 0");
  if (!(noise_scale >= 0.0)) throw ConfigError("privacy.noise_scale must be >= 0");
  if (model_kind == ModelKind::kMlp) RequirePositive(hidden, "model.hidden");
  if (!(baseline_bytes >= 0.0)) {
    throw ConfigError("metrics.baseline_bytes must be >= 0");
  }
  if (!(diagnostic_delta_s > 0.0 && diagnostic_delta_s < 1.0)) {
    throw ConfigError("diagnostics.delta_s must lie in (0, 1)");
  }
}

ClientMessage ClientStep(Variant variant, const ModelParams& model,
                         const Batch& batch,
                         const ClientRoundContext& context) {
  LossAndGradient lg = ComputeLossAndGradient(model, batch);
  ClientMessage message;
  message.loss = lg.loss;
  std::vector<double>& g = lg.gradient;

  if (EmitsClipBits(variant)) {
    message.bit = ComputeClipImpactBit(
        g, context.clipping.threshold, context.topk_indices,
        context.clipping.theta, context.clipping.sigma_b, context.bit_seed);
  }
  if (ClipsGradients(variant)) ClipInPlace(g, context.clipping.threshold);

  if (!UsesSketch(variant)) {
    if (IsPrivate(variant)) {
      AddGaussianNoise(g, context.noise.sigma, context.noise_seed);
    }
    message.dense = std::move(g);
    return message;
  }
  if (context.sketch == nullptr) {
    throw ConfigError("sketch variant invoked without a sketch config");
  }
  CountSketch sketch(*context.sketch);
  sketch.Insert(g);
  if (IsPrivate(variant)) {
    AddGaussianNoise(sketch, context.noise, context.noise_seed);
  }
  message.sketch = std::move(sketch);
  return message;
}

ServerState InitializeServer(const RunConfig& config,
                             const SketchConfig& sketch_config,
                             ModelParams model, PrivacyAccountant accountant) {
  ServerState state;
  state.model = std::move(model);
  if (UsesSketch(config.variant)) {
    state.momentum_sketch.emplace(sketch_config);
    state.error_sketch.emplace(sketch_config);
  } else {
    state.dense_momentum.assign(state.model.values.size(), 0.0);
  }
  state.clipping = config.clipping;
  state.accountant = accountant;
  return state;
}

RoundOutcome ServerRound(ServerState& state,
                         std::span<const ClientMessage> messages,
                         const RunConfig& config) {
  if (static_cast<int64_t>(messages.size()) != config.clients_per_round) {
    throw ConfigError("server round expected " +
                      std::to_string(config.clients_per_round) +
                      " messages, got " + std::to_string(messages.size()));
  }
  std::vector<ClipImpactBit> bits;
  for (const auto& m : messages) {
    if (m.bit) bits.push_back(*m.bit);
  }
  if (IsPrivate(config.variant)) {
    state.accountant.Spend(state.accountant.RoundCost(!bits.empty()));
    if (!bits.empty()) state.accountant.ReportBitRelease();
  }

  RoundOutcome outcome;
  if (UsesSketch(config.variant)) {
    // Extended-precision accumulation keeps the mean of N identical
    // sketches exact.
    CountSketch aggregate(state.error_sketch->config());
    std::vector<long double> sum(aggregate.counters().size(), 0.0L);
    for (const auto& m : messages) {
      if (!m.sketch) throw ConfigError("sketch variant received a dense message");
      if (!(m.sketch->config() == aggregate.config())) {
        throw ConfigError("client sketch is not merge-compatible with the server");
      }
      const auto counters = m.sketch->counters();
      for (size_t c = 0; c < sum.size(); ++c) sum[c] += counters[c];
    }
    auto out = aggregate.mutable_counters();
    for (size_t c = 0; c < sum.size(); ++c) {
      out[c] = static_cast<double>(sum[c] / static_cast<long double>(messages.size()));
    }

    CountSketch& momentum = *state.momentum_sketch;
    CountSketch& error = *state.error_sketch;
    momentum.Scale(config.momentum);
    momentum.Merge(aggregate);
    error.AddScaled(momentum, config.learning_rate);
    outcome.delta = error.UnsketchTopK(config.topk);
    CountSketch applied(error.config());
    applied.Insert(outcome.delta.entries);
    error.AddScaled(applied, -1.0);
    ApplyUpdate(state.model, outcome.delta);
    state.last_topk = outcome.delta.Indices();
  } else {
    std::vector<long double> sum(state.model.values.size(), 0.0L);
    for (const auto& m : messages) {
      if (m.dense.size() != sum.size()) {
        throw ConfigError("dense message has the wrong dimension");
      }
      for (size_t i = 0; i < sum.size(); ++i) sum[i] += m.dense[i];
    }
    const auto n = static_cast<long double>(messages.size());
    std::vector<double> step(sum.size());
    for (size_t i = 0; i < sum.size(); ++i) {
      state.dense_momentum[i] =
          config.momentum * state.dense_momentum[i] + static_cast<double>(sum[i] / n);
      step[i] = config.learning_rate * state.dense_momentum[i];
    }
    ApplyUpdate(state.model, step);
    outcome.delta.entries.reserve(step.size());
    for (size_t i = 0; i < step.size(); ++i) {
      outcome.delta.entries.push_back({static_cast<int64_t>(i), step[i]});
    }
  }

  if (!bits.empty()) {
    outcome.b_bar = AggregateBits(bits);
    double raw = 0.0;
    for (const auto& b : bits) raw += b.raw;
    outcome.bit_raw_mean = raw / static_cast<double>(bits.size());
    state.clipping = UpdateThreshold(state.clipping, *outcome.b_bar);
  }
  ++state.round;
  return outcome;
}

std::vector<int64_t> SampleClients(int64_t total, int64_t n, uint64_t seed) {
  if (total < 1 || n < 1 || n > total) {
    throw ArgumentError("cannot sample " + std::to_string(n) + " of " +
                        std::to_string(total) + " clients");
  }
  std::vector<int64_t> all(static_cast<size_t>(total));
  std::iota(all.begin(), all.end(), 0);
  std::vector<int64_t> picked;
  picked.reserve(static_cast<size_t>(n));
  Rng rng(seed);
  std::sample(all.begin(), all.end(), std::back_inserter(picked), n, rng);
  return picked;
}

Architecture ArchitectureFor(const RunConfig& config, const Dataset& train) {
  Architecture arch;
  arch.kind = config.model_kind;
  arch.input_dim = train.input_dim;
  arch.num_outputs = train.is_classification() ? train.num_classes : 1;
  arch.hidden = config.model_kind == ModelKind::kMlp ? config.hidden : 0;
  arch.Validate();
  return arch;
}

RunResult Run(const RunConfig& config, const Dataset& train,
              const ClientPartition& partition, const Dataset& test) {
  config.Validate();
  if (partition.num_clients() != config.total_clients) {
    throw ConfigError("partition has " + std::to_string(partition.num_clients()) +
                      " clients, config expects " +
                      std::to_string(config.total_clients));
  }
  const Architecture arch = ArchitectureFor(config, train);
  const int64_t d = arch.ParameterCount();
  const Variant variant = config.variant;
  if (UsesSketch(variant) && config.topk > d) {
    throw ConfigError("sketch.k (" + std::to_string(config.topk) +
                      ") exceeds the model dimension (" + std::to_string(d) +
                      ")");
  }

  SketchConfig sketch_config{config.sketch_rows, config.sketch_columns,
                             DeriveSeed(config.seed, {kTagSketchHash}), d};

  RunResult result;
  RunMetadata& meta = result.metadata;
  meta.dimension = d;
  meta.sketch = sketch_config;

  PrivacyAccountant accountant;
  if (IsPrivate(variant)) {
    const double rho_total = RhoFromEpsilon(config.epsilon, config.delta);
    const int64_t budgeted =
        config.budget_rounds > 0 ? config.budget_rounds : std::max<int64_t>(config.rounds, 1);
    const bool bits = EmitsClipBits(variant);
    // Round 0 has no previous top-k, so no bits.
    const int64_t bit_rounds = bits ? std::max<int64_t>(budgeted - 1, 0) : 0;
    const double bit_rho = bits ? BitRhoCost(config.clipping.sigma_b) : 0.0;
    accountant = PrivacyAccountant::ForRounds(rho_total, budgeted, bit_rounds,
                                              bit_rho, config.bit_accounting);
    meta.rho_total = rho_total;
    meta.per_round_rho = accountant.per_round_rho();
    meta.bit_rho_per_round = bit_rho;
    if (UsesSketch(variant)) {
      meta.initial_sigma = CalibrateSketchNoise(config.clipping.threshold,
                                                config.sketch_rows,
                                                accountant.per_round_rho())
                               .sigma;
      const double tau = std::min(0.99, 2.0 / static_cast<double>(config.sketch_columns));
      meta.noise_impact =
          NoiImp(accountant.per_round_rho(), tau, config.diagnostic_delta_s);
    } else {
      meta.initial_sigma =
          CalibrateGaussian(config.clipping.threshold, accountant.per_round_rho())
              .sigma;
    }
    meta.initial_sigma *= config.noise_scale;
  }

  ServerState state = InitializeServer(
      config, sketch_config,
      InitializeModel(arch, DeriveSeed(config.seed, {kTagInit})), accountant);

  const ClientTraffic traffic =
      UsesSketch(variant)
          ? SketchClientTraffic(config.sketch_rows, config.sketch_columns,
                                config.topk, false)
          : DenseClientTraffic(d);
  const int64_t n = config.clients_per_round;
  int64_t cumulative_bytes = 0;

  for (int64_t t = 0; t < config.rounds; ++t) {
    const bool bits_this_round = EmitsClipBits(variant) && !state.last_topk.empty();
    if (IsPrivate(variant) &&
        !state.accountant.CanSpend(state.accountant.RoundCost(bits_this_round))) {
      meta.stopped_early = true;
      if (!result.records.empty()) {
        result.records.back().status = std::string(kStatusBudgetExhausted);
      }
      break;
    }

    ClientRoundContext context;
    context.sketch = &sketch_config;
    context.clipping = state.clipping;
    context.topk_indices = state.last_topk;
    if (IsPrivate(variant)) {
      context.noise =
          UsesSketch(variant)
              ? CalibrateSketchNoise(state.clipping.threshold, config.sketch_rows,
                                     state.accountant.per_round_rho())
              : CalibrateGaussian(state.clipping.threshold,
                                  state.accountant.per_round_rho());
      context.noise.sigma *= config.noise_scale;
    }

    const uint64_t round = static_cast<uint64_t>(t);
    const std::vector<int64_t> selected = SampleClients(
        config.total_clients, n, DeriveSeed(config.seed, {kTagSampling, round}));
    std::vector<ClientMessage> messages;
    messages.reserve(selected.size());
    double loss = 0.0;
    for (int64_t client : selected) {
      const auto id = static_cast<uint64_t>(client);
      const Batch batch = DrawBatch(train, partition.clients[static_cast<size_t>(client)],
                                    config.batch_size,
                                    DeriveSeed(config.seed, {kTagBatch, round, id}));
      context.noise_seed = DeriveSeed(
          config.seed,
          {UsesSketch(variant) ? kTagSketchNoise : kTagDenseNoise, round, id});
      context.bit_seed = DeriveSeed(config.seed, {kTagBitNoise, round, id});
      messages.push_back(ClientStep(variant, state.model, batch, context));
      loss += messages.back().loss;
    }

    const RoundOutcome outcome = ServerRound(state, messages, config);

    RoundRecord record;
    record.round = t;
    record.loss = loss / static_cast<double>(n);
    if (test.is_classification() && test.size() > 0) {
      record.accuracy = EvaluateAccuracy(state.model, test);
    }
    record.threshold = state.clipping.threshold;
    record.b_bar = outcome.b_bar;
    record.bit_raw_mean = outcome.bit_raw_mean;
    record.rho_spent = state.accountant.rho_spent();
    if (IsPrivate(variant)) {
      record.epsilon_equiv = state.accountant.EpsilonSpent(config.delta);
    }
    const int64_t bit_bytes = outcome.b_bar ? 8 : 0;
    record.bytes_up = n * (traffic.up + bit_bytes);
    record.bytes_down = n * traffic.down;
    cumulative_bytes += record.bytes_up + record.bytes_down;
    const double baseline =
        config.baseline_bytes > 0.0
            ? config.baseline_bytes
            : static_cast<double>(t + 1) * static_cast<double>(n) * 16.0 *
                  static_cast<double>(d);
    record.compression_level =
        CompressionLevel(baseline, static_cast<double>(cumulative_bytes));
    result.records.push_back(std::move(record));
  }

  meta.rounds_completed = static_cast<int64_t>(result.records.size());
  meta.bit_rho_reported = state.accountant.bit_rho_reported();
  meta.total_bytes = cumulative_bytes;
  result.final_model = std::move(state.model);
  return result;
}

}  // namespace dpsketch
