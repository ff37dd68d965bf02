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

#ifndef DPSKETCH_PRIVACY_H_
#define DPSKETCH_PRIVACY_H_

#include <cstdint>
#include <span>
#include <string_view>

#include "dpsketch/count_sketch.h"

namespace dpsketch {

// zCDP <-> (epsilon, delta)-DP. All logarithms are natural.
//
//   epsilon = rho + 2 sqrt(rho ln(1/delta))
//
// inverted in closed form as sqrt(rho) = sqrt(L + epsilon) - sqrt(L),
// L = ln(1/delta).
double EpsilonFromRho(double rho, double delta);
double RhoFromEpsilon(double epsilon, double delta);

struct PrivacyBudget {
  double epsilon;
  double delta;
  double rho;

  static PrivacyBudget FromEpsilon(double epsilon, double delta);
};

// Gaussian mechanism parameters. sigma^2 = sensitivity^2 / (2 rho).
struct NoiseSpec {
  double sigma = 0.0;
  double sensitivity = 0.0;
  double rho = 0.0;

  static NoiseSpec None() { return {}; }
};

NoiseSpec CalibrateGaussian(double sensitivity, double rho);

// l2 sensitivity of a sketch of a vector with norm at most `clip`: each of
// the `rows` rows changes in at most one counter by at most `clip`.
double SketchSensitivity(double clip, int64_t rows);
// sigma = clip * sqrt(rows / (2 rho)).
NoiseSpec CalibrateSketchNoise(double clip, int64_t rows, double rho);

// Adds i.i.d. N(0, spec.sigma^2) to every counter. Deterministic in seed.
void AddGaussianNoise(CountSketch& sketch, const NoiseSpec& spec,
                      uint64_t seed);
void AddGaussianNoise(std::span<double> values, double sigma, uint64_t seed);

// zCDP cost of releasing a sensitivity-1 scalar with N(0, sigma_b^2) noise.
// Infinite for sigma_b == 0.
double BitRhoCost(double sigma_b);

// Noise-impact term from the convergence analysis of noisy sketches:
//   (1 / (rho tau)) ln(1/delta_s) ln((2/tau) ln(1/delta_s) / delta_s).
// Reported as run metadata only.
double NoiImp(double rho, double tau, double delta_s);

enum class BitAccounting {
  kStrict,  // clipping-impact bits are charged against the budget
  kLegacy,  // bit cost is reported but not charged
};

std::string_view BitAccountingName(BitAccounting mode);
BitAccounting ParseBitAccounting(std::string_view name);

// Tracks zCDP expenditure. Composition is additive.
class PrivacyAccountant {
 public:
  PrivacyAccountant() = default;
  PrivacyAccountant(double rho_total, double per_round_rho,
                    double bit_rho_per_round, BitAccounting mode);

  // Uniform split of a total budget across `rounds` rounds. Rounds that emit a
  // clipping bit additionally cost `bit_rho` (charged in strict mode), so the
  // sketch budget is (rho_total - bit_rounds * bit_rho) / rounds.
  // Throws ConfigError if the bits alone exceed the budget.
  static PrivacyAccountant ForRounds(double rho_total, int64_t rounds,
                                     int64_t bit_rounds, double bit_rho,
                                     BitAccounting mode);

  // Records an expenditure. Throws BudgetExhaustedError (leaving the state
  // untouched) when rho_spent + cost would exceed rho_total.
  void Spend(double rho_cost);
  bool CanSpend(double rho_cost) const;

  // Cost of one round, as charged: per_round_rho plus the bit cost when the
  // round emits bits and the mode is strict.
  double RoundCost(bool emits_bits) const;

  double rho_total() const { return rho_total_; }
  double rho_spent() const { return rho_spent_; }
  double per_round_rho() const { return per_round_rho_; }
  double bit_rho_per_round() const { return bit_rho_per_round_; }
  // Bit cost accrued so far whether or not it was charged.
  double bit_rho_reported() const { return bit_rho_reported_; }
  BitAccounting mode() const { return mode_; }

  double EpsilonSpent(double delta) const;

  void ReportBitRelease() { bit_rho_reported_ += bit_rho_per_round_; }

 private:
  double rho_total_ = 0.0;
  double rho_spent_ = 0.0;
  double per_round_rho_ = 0.0;
  double bit_rho_per_round_ = 0.0;
  double bit_rho_reported_ = 0.0;
  BitAccounting mode_ = BitAccounting::kStrict;
};

}  // namespace dpsketch

#endif  // DPSKETCH_PRIVACY_H_
