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

#ifndef DPSKETCH_SELFTEST_H_
#define DPSKETCH_SELFTEST_H_

#include <string>
#include <vector>

namespace dpsketch {

struct SelfTestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Runs the library's invariants on small instances: sketch linearity and
// determinism, the epsilon/rho round trip, calibration identity, accountant
// conservation, the clip contract, and the sigma = 0 degeneracy of the
// private sketch loop. Takes well under a second.
std::vector<SelfTestResult> RunSelfTests();

}  // namespace dpsketch

#endif  // DPSKETCH_SELFTEST_H_
