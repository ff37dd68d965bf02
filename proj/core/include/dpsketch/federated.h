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

#ifndef DPSKETCH_FEDERATED_H_
#define DPSKETCH_FEDERATED_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dpsketch/clipping.h"
#include "dpsketch/count_sketch.h"
#include "dpsketch/data_ingest.h"
#include "dpsketch/dataset.h"
#include "dpsketch/metrics.h"
#include "dpsketch/model.h"
#include "dpsketch/privacy.h"

namespace dpsketch {

enum class Variant {
  kFedAvg,         // dense gradients, no clipping, no noise
  kDpfl,           // dense, clipped, per-coordinate Gaussian noise
  kFetchSgd,       // sketched, no clipping, no noise
  kDpsflNonNoise,  // sketched and clipped, no noise
  kDpsfl,          // sketched, clipped, noisy counters
  kDpsflAc,        // kDpsfl plus the adaptive clipping controller
};

std::string_view VariantName(Variant variant);
Variant ParseVariant(std::string_view name);

bool UsesSketch(Variant variant);
bool ClipsGradients(Variant variant);
bool IsPrivate(Variant variant);
bool EmitsClipBits(Variant variant);

struct RunConfig {
  Variant variant = Variant::kDpsfl;
  int64_t rounds = 100;             // T
  int64_t clients_per_round = 10;   // N
  int64_t total_clients = 100;
  int64_t batch_size = 32;
  double learning_rate = 0.1;       // eta
  double momentum = 0.9;            // beta
  int64_t topk = 50000;             // k
  int64_t sketch_rows = 5;          // l
  int64_t sketch_columns = 500000;  // m
  ClippingState clipping;

  double epsilon = 4.0;
  double delta = 1e-5;
  BitAccounting bit_accounting = BitAccounting::kStrict;
  // Rounds the budget is split over; 0 means `rounds`. Fewer budgeted rounds
  // than rounds makes the run stop early on exhaustion.
  int64_t budget_rounds = 0;
  // Multiplies every calibrated gradient-noise sigma. 1 is the private
  // setting; 0 switches noise off while still charging the accountant.
  double noise_scale = 1.0;

  ModelKind model_kind = ModelKind::kLogisticRegression;
  int64_t hidden = 32;

  // Absolute CL baseline in bytes; 0 uses the dense uncompressed cost of the
  // rounds run so far (N clients x 16 d bytes per round).
  double baseline_bytes = 0.0;
  // delta_s used for the reported noise-impact diagnostic.
  double diagnostic_delta_s = 0.01;

  uint64_t seed = 0;

  // Shape and rate checks that do not depend on the dataset.
  void Validate() const;
};

struct ClientMessage {
  std::optional<CountSketch> sketch;
  std::vector<double> dense;
  std::optional<ClipImpactBit> bit;
  double loss = 0.0;
};

struct ServerState {
  ModelParams model;
  std::optional<CountSketch> momentum_sketch;  // S_u
  std::optional<CountSketch> error_sketch;     // S_e
  std::vector<double> dense_momentum;
  ClippingState clipping;
  PrivacyAccountant accountant;
  int64_t round = 0;
  std::vector<int64_t> last_topk;
};

// Everything a client needs besides the model and its batch.
struct ClientRoundContext {
  const SketchConfig* sketch = nullptr;  // sketch variants only
  ClippingState clipping;
  std::span<const int64_t> topk_indices;
  NoiseSpec noise;  // per counter (sketch) or per coordinate (dense)
  uint64_t noise_seed = 0;
  uint64_t bit_seed = 0;
};

// Gradient on the batch, then per variant: clip, sketch, add noise, and for
// the adaptive variant the noisy clipping-impact bit (skipped while no top-k
// indices exist).
ClientMessage ClientStep(Variant variant, const ModelParams& model,
                         const Batch& batch, const ClientRoundContext& context);

ServerState InitializeServer(const RunConfig& config,
                             const SketchConfig& sketch_config,
                             ModelParams model, PrivacyAccountant accountant);

struct RoundOutcome {
  TopKResult delta;  // applied update (dense variants: all d coordinates)
  std::optional<double> b_bar;
  std::optional<double> bit_raw_mean;
};

// Sketch variants: mean of client sketches, momentum, error feedback, top-k
// unsketch, error accumulation, model update, then the threshold update for
// the adaptive variant. Dense variants: mean gradient, momentum, SGD step.
// Charges the accountant first; throws BudgetExhaustedError before touching
// the state when the round is unaffordable.
RoundOutcome ServerRound(ServerState& state,
                         std::span<const ClientMessage> messages,
                         const RunConfig& config);

// Uniform sample of n distinct clients out of total, sorted ascending.
std::vector<int64_t> SampleClients(int64_t total, int64_t n, uint64_t seed);

struct RunMetadata {
  int64_t dimension = 0;
  SketchConfig sketch;
  double rho_total = 0.0;
  double per_round_rho = 0.0;
  double bit_rho_per_round = 0.0;
  double bit_rho_reported = 0.0;
  double initial_sigma = 0.0;
  std::optional<double> noise_impact;
  int64_t rounds_completed = 0;
  bool stopped_early = false;
  int64_t total_bytes = 0;
};

struct RunResult {
  std::vector<RoundRecord> records;
  ModelParams final_model;
  RunMetadata metadata;
};

// Architecture implied by the config and the training data.
Architecture ArchitectureFor(const RunConfig& config, const Dataset& train);

// Runs up to config.rounds rounds, stopping early (and marking the last
// record) when the privacy budget runs out. Deterministic in config.seed.
RunResult Run(const RunConfig& config, const Dataset& train,
              const ClientPartition& partition, const Dataset& test);

}  // namespace dpsketch

#endif  // DPSKETCH_FEDERATED_H_
