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

#include "dpsketch/clipping.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "dpsketch/errors.h"
#include "dpsketch/random.h"

namespace dpsketch {

double L2Norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

double ClipScale(double norm, double threshold) {
  if (!(threshold > 0.0)) {
    throw ArgumentError("clipping threshold must be > 0");
  }
  return 1.0 / std::max(1.0, norm / threshold);
}

void ClipInPlace(std::span<double> g, double threshold) {
  const double scale = ClipScale(L2Norm(g), threshold);
  if (scale == 1.0) return;
  for (double& x : g) x *= scale;
}

std::vector<double> Clip(std::span<const double> g, double threshold) {
  std::vector<double> out(g.begin(), g.end());
  ClipInPlace(out, threshold);
  return out;
}

std::optional<ClipImpactBit> ComputeClipImpactBit(
    std::span<const double> g, double threshold,
    std::span<const int64_t> topk_indices, double theta, double sigma_b,
    uint64_t seed) {
  if (topk_indices.empty()) return std::nullopt;
  const double scale = ClipScale(L2Norm(g), threshold);
  double top_sq = 0.0;
  double err_sq = 0.0;
  for (int64_t i : topk_indices) {
    if (i < 0 || static_cast<size_t>(i) >= g.size()) {
      throw ArgumentError("clip impact: index " + std::to_string(i) +
                          " outside the gradient");
    }
    const double v = g[static_cast<size_t>(i)];
    const double diff = v * scale - v;
    top_sq += v * v;
    err_sq += diff * diff;
  }
  ClipImpactBit bit;
  bit.raw = std::sqrt(err_sq) <= theta * std::sqrt(top_sq) ? 1 : 0;
  bit.value = static_cast<double>(bit.raw);
  if (sigma_b > 0.0) {
    Rng rng(seed);
    bit.value += std::normal_distribution<double>(0.0, sigma_b)(rng);
  }
  return bit;
}

double AggregateBits(std::span<const ClipImpactBit> bits) {
  if (bits.empty()) throw ArgumentError("cannot aggregate an empty bit list");
  double sum = 0.0;
  for (const auto& b : bits) sum += b.value;
  return sum / static_cast<double>(bits.size());
}

ClippingState UpdateThreshold(const ClippingState& state, double b_bar) {
  ClippingState next = state;
  next.threshold = state.threshold * std::exp(-state.eta_c * (b_bar - state.gamma));
  return next;
}

}  // namespace dpsketch
