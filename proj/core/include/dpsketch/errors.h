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

#ifndef DPSKETCH_ERRORS_H_
#define DPSKETCH_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dpsketch {

// Shapes or settings that cannot work together (dimension mismatch,
// incompatible sketches, invalid run configuration).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A single argument outside its documented domain.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or truncated input files.
class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The privacy accountant refused an expenditure. Runs must stop.
class BudgetExhaustedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dpsketch

#endif  // DPSKETCH_ERRORS_H_
