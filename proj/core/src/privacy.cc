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

#include "dpsketch/privacy.h"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "dpsketch/errors.h"
#include "dpsketch/random.h"

namespace dpsketch {
namespace {

// Relative slack absorbing rounding when a budget is split evenly and summed
// back up.
constexpr double kBudgetSlack = 1e-12;

void CheckDelta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ArgumentError("delta must lie in (0, 1)");
  }
}

}  // namespace

double EpsilonFromRho(double rho, double delta) {
  CheckDelta(delta);
  if (!(rho >= 0.0)) throw ArgumentError("rho must be >= 0");
  return rho + 2.0 * std::sqrt(rho * std::log(1.0 / delta));
}

double RhoFromEpsilon(double epsilon, double delta) {
  CheckDelta(delta);
  if (!(epsilon > 0.0)) throw ArgumentError("epsilon must be > 0");
  const double log_inv_delta = std::log(1.0 / delta);
  // sqrt(L + eps) - sqrt(L) rewritten to avoid cancellation for small eps.
  const double root = epsilon / (std::sqrt(log_inv_delta + epsilon) +
                                 std::sqrt(log_inv_delta));
  return root * root;
}

PrivacyBudget PrivacyBudget::FromEpsilon(double epsilon, double delta) {
  return {epsilon, delta, RhoFromEpsilon(epsilon, delta)};
}

NoiseSpec CalibrateGaussian(double sensitivity, double rho) {
  if (!(sensitivity >= 0.0)) throw ArgumentError("sensitivity must be >= 0");
  if (!(rho > 0.0)) throw ArgumentError("rho must be > 0");
  return {sensitivity / std::sqrt(2.0 * rho), sensitivity, rho};
}

double SketchSensitivity(double clip, int64_t rows) {
  if (!(clip > 0.0)) throw ArgumentError("clipping threshold must be > 0");
  if (rows < 1) throw ArgumentError("sketch rows must be >= 1");
  return clip * std::sqrt(static_cast<double>(rows));
}

NoiseSpec CalibrateSketchNoise(double clip, int64_t rows, double rho) {
  if (!(rho > 0.0)) throw ArgumentError("rho must be > 0");
  return {clip * std::sqrt(static_cast<double>(rows) / (2.0 * rho)),
          SketchSensitivity(clip, rows), rho};
}

void AddGaussianNoise(std::span<double> values, double sigma, uint64_t seed) {
  if (!(sigma >= 0.0)) throw ArgumentError("noise sigma must be >= 0");
  if (sigma == 0.0) return;
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  for (double& v : values) v += normal(rng);
}

void AddGaussianNoise(CountSketch& sketch, const NoiseSpec& spec,
                      uint64_t seed) {
  AddGaussianNoise(sketch.mutable_counters(), spec.sigma, seed);
}

double BitRhoCost(double sigma_b) {
  if (!(sigma_b >= 0.0)) throw ArgumentError("sigma_b must be >= 0");
  if (sigma_b == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (2.0 * sigma_b * sigma_b);
}

double NoiImp(double rho, double tau, double delta_s) {
  if (!(rho > 0.0)) throw ArgumentError("rho must be > 0");
  if (!(tau > 0.0 && tau < 1.0)) throw ArgumentError("tau must lie in (0, 1)");
  if (!(delta_s > 0.0 && delta_s < 1.0)) {
    throw ArgumentError("delta_s must lie in (0, 1)");
  }
  const double log_inv = std::log(1.0 / delta_s);
  return (1.0 / (rho * tau)) * log_inv *
         std::log((2.0 / tau) * log_inv / delta_s);
}

std::string_view BitAccountingName(BitAccounting mode) {
  return mode == BitAccounting::kStrict ? "strict" : "legacy";
}

BitAccounting ParseBitAccounting(std::string_view name) {
  if (name == "strict") return BitAccounting::kStrict;
  if (name == "legacy") return BitAccounting::kLegacy;
  throw ArgumentError("unknown bit accounting mode '" + std::string(name) +
                      "' (expected strict or legacy)");
}

PrivacyAccountant::PrivacyAccountant(double rho_total, double per_round_rho,
                                     double bit_rho_per_round,
                                     BitAccounting mode)
    : rho_total_(rho_total),
      per_round_rho_(per_round_rho),
      bit_rho_per_round_(bit_rho_per_round),
      mode_(mode) {
  if (!(rho_total >= 0.0)) throw ArgumentError("rho_total must be >= 0");
  if (!(per_round_rho >= 0.0)) throw ArgumentError("per-round rho must be >= 0");
  if (!(bit_rho_per_round >= 0.0)) {
    throw ArgumentError("bit rho must be >= 0");
  }
}

PrivacyAccountant PrivacyAccountant::ForRounds(double rho_total,
                                               int64_t rounds,
                                               int64_t bit_rounds,
                                               double bit_rho,
                                               BitAccounting mode) {
  if (rounds < 1) throw ArgumentError("budgeted rounds must be >= 1");
  double available = rho_total;
  if (mode == BitAccounting::kStrict && bit_rounds > 0) {
    available -= static_cast<double>(bit_rounds) * bit_rho;
    if (!(available > 0.0)) {
      throw ConfigError(
          "clipping-bit releases cost " +
          std::to_string(static_cast<double>(bit_rounds) * bit_rho) +
          " rho, which exhausts the total budget of " +
          std::to_string(rho_total) +
          "; raise clipping.sigma_b or use privacy.bit_accounting: legacy");
    }
  }
  return PrivacyAccountant(rho_total, available / static_cast<double>(rounds),
                           bit_rho, mode);
}

bool PrivacyAccountant::CanSpend(double rho_cost) const {
  return rho_spent_ + rho_cost <= rho_total_ * (1.0 + kBudgetSlack);
}

void PrivacyAccountant::Spend(double rho_cost) {
  if (!(rho_cost >= 0.0)) throw ArgumentError("rho cost must be >= 0");
  if (!CanSpend(rho_cost)) {
    throw BudgetExhaustedError(
        "privacy budget exhausted: spent " + std::to_string(rho_spent_) +
        " + requested " + std::to_string(rho_cost) + " > total " +
        std::to_string(rho_total_));
  }
  rho_spent_ += rho_cost;
  if (rho_spent_ > rho_total_) rho_spent_ = rho_total_;
}

double PrivacyAccountant::RoundCost(bool emits_bits) const {
  double cost = per_round_rho_;
  if (emits_bits && mode_ == BitAccounting::kStrict) {
    cost += bit_rho_per_round_;
  }
  return cost;
}

double PrivacyAccountant::EpsilonSpent(double delta) const {
  return EpsilonFromRho(rho_spent_, delta);
}

}  // namespace dpsketch
