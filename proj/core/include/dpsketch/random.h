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

#ifndef DPSKETCH_RANDOM_H_
#define DPSKETCH_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace dpsketch {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Bijective on 64-bit words with full avalanche.
constexpr uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from a base seed and a tag path,
// e.g. DeriveSeed(run_seed, {kNoiseTag, round, client}). Order matters.
uint64_t DeriveSeed(uint64_t base, std::initializer_list<uint64_t> tags);

// Stream tags for DeriveSeed. Distinct so that different consumers in a run
// never share a stream.
enum SeedTag : uint64_t {
  kTagSampling = 0x53414d50,
  kTagBatch = 0x42415443,
  kTagSketchNoise = 0x534e4f49,
  kTagDenseNoise = 0x444e4f49,
  kTagBitNoise = 0x42495420,
  kTagInit = 0x494e4954,
  kTagPartition = 0x50415254,
  kTagSplit = 0x53504c54,
};

}  // namespace dpsketch

#endif  // DPSKETCH_RANDOM_H_
