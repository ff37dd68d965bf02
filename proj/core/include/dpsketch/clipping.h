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

#ifndef DPSKETCH_CLIPPING_H_
#define DPSKETCH_CLIPPING_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dpsketch {

double L2Norm(std::span<const double> v);

// Scale factor 1 / max(1, norm / threshold).
double ClipScale(double norm, double threshold);

// g / max(1, ||g|| / threshold). The result has norm <= threshold and the
// direction of g.
std::vector<double> Clip(std::span<const double> g, double threshold);
void ClipInPlace(std::span<double> g, double threshold);

// Threshold plus the adaptive controller's parameters.
struct ClippingState {
  double threshold = 1.5;  // C
  double gamma = 0.9;      // target probability that clipping is harmless
  double theta = 0.5;      // tolerated relative top-k clipping error
  double eta_c = 0.01;     // controller learning rate
  double sigma_b = 0.1;    // std of the noise added to each client bit
};

struct ClipImpactBit {
  int raw = 0;        // 0 or 1, never released
  double value = 0.0; // raw + N(0, sigma_b^2)
};

// Whether clipping at `threshold` keeps the error on the coordinates in
// `topk_indices` within theta times their norm:
//   || Top(clip(g)) - Top(g) || <= theta || Top(g) ||.
// When Top(g) is zero the inequality holds (0 <= 0). Returns nullopt when
// there are no indices yet; callers skip the bit for that round.
std::optional<ClipImpactBit> ComputeClipImpactBit(
    std::span<const double> g, double threshold,
    std::span<const int64_t> topk_indices, double theta, double sigma_b,
    uint64_t seed);

// Mean of the noisy bit values. Throws ArgumentError on an empty list.
double AggregateBits(std::span<const ClipImpactBit> bits);

// C <- C * exp(-eta_c (b_bar - gamma)). b_bar is used as is, even outside
// [0, 1].
ClippingState UpdateThreshold(const ClippingState& state, double b_bar);

}  // namespace dpsketch

#endif  // DPSKETCH_CLIPPING_H_
