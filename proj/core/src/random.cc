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

#include "dpsketch/random.h"

namespace dpsketch {

uint64_t DeriveSeed(uint64_t base, std::initializer_list<uint64_t> tags) {
  uint64_t state = Mix64(base);
  for (uint64_t tag : tags) {
    state = Mix64(state ^ Mix64(tag + 0x632be59bd9b4e019ULL));
  }
  return state;
}

}  // namespace dpsketch
