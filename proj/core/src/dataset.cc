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

#include "dpsketch/dataset.h"

#include <string>

#include "dpsketch/errors.h"

namespace dpsketch {

int64_t Dataset::size() const {
  return is_classification() ? static_cast<int64_t>(labels.size())
                             : static_cast<int64_t>(targets.size());
}

Dataset Dataset::Subset(std::span<const int64_t> indices) const {
  Dataset out;
  out.input_dim = input_dim;
  out.num_classes = num_classes;
  out.features.reserve(indices.size() * static_cast<size_t>(input_dim));
  for (int64_t i : indices) {
    if (i < 0 || i >= size()) {
      throw ArgumentError("dataset subset: index " + std::to_string(i) +
                          " out of range");
    }
    const auto r = row(i);
    out.features.insert(out.features.end(), r.begin(), r.end());
    if (is_classification()) {
      out.labels.push_back(labels[static_cast<size_t>(i)]);
    } else {
      out.targets.push_back(targets[static_cast<size_t>(i)]);
    }
  }
  return out;
}

void Dataset::Validate() const {
  if (input_dim < 1) throw ConfigError("dataset input_dim must be >= 1");
  if (num_classes < 0) throw ConfigError("dataset num_classes must be >= 0");
  const int64_t n = size();
  if (static_cast<int64_t>(features.size()) != n * input_dim) {
    throw ConfigError("dataset has " + std::to_string(features.size()) +
                      " feature values for " + std::to_string(n) + " rows of " +
                      std::to_string(input_dim));
  }
  if (is_classification()) {
    if (!targets.empty()) {
      throw ConfigError("classification dataset carries regression targets");
    }
    for (int32_t y : labels) {
      if (y < 0 || y >= num_classes) {
        throw ConfigError("label " + std::to_string(y) + " outside [0, " +
                          std::to_string(num_classes) + ")");
      }
    }
  } else if (!labels.empty()) {
    throw ConfigError("regression dataset carries class labels");
  }
}

}  // namespace dpsketch
