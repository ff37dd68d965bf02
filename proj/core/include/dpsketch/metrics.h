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

#ifndef DPSKETCH_METRICS_H_
#define DPSKETCH_METRICS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dpsketch {

// One line of the per-round metrics stream. Optional fields are written as
// JSON null (accuracy for regression models, bit statistics in rounds
// without bits, epsilon for non-private variants).
struct RoundRecord {
  int64_t round = 0;
  double loss = 0.0;
  std::optional<double> accuracy;
  double threshold = 0.0;
  std::optional<double> b_bar;
  std::optional<double> bit_raw_mean;
  double rho_spent = 0.0;
  std::optional<double> epsilon_equiv;
  int64_t bytes_up = 0;
  int64_t bytes_down = 0;
  double compression_level = 0.0;
  std::string status = "ok";

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

inline constexpr std::string_view kStatusOk = "ok";
inline constexpr std::string_view kStatusBudgetExhausted = "budget_exhausted";

// Single-line JSON with keys t, loss, acc, C, b_bar, bit_raw_mean,
// rho_spent, epsilon_equiv, bytes_up, bytes_down, CL, status in that order.
std::string ToJsonLine(const RoundRecord& record);
RoundRecord ParseJsonLine(std::string_view line);

void WriteRecords(const std::filesystem::path& path,
                  std::span<const RoundRecord> records);
std::vector<RoundRecord> ReadRecords(const std::filesystem::path& path);

// Byte accounting for one client in one round.
struct ClientTraffic {
  int64_t up = 0;
  int64_t down = 0;
};

// Sketch variants upload the serialized sketch (32-byte header plus 8 bytes
// per counter) and one 8-byte scalar when a clipping bit is sent; they
// download the sparse update as k (u32 index, f64 value) pairs.
ClientTraffic SketchClientTraffic(int64_t rows, int64_t columns, int64_t k,
                                  bool sends_bit);
// Dense variants move d 8-byte values each way.
ClientTraffic DenseClientTraffic(int64_t dimension);

// CL = baseline / communication cost.
double CompressionLevel(double baseline_bytes, double communication_bytes);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for one value
};
MeanStd ComputeMeanStd(std::span<const double> values);

}  // namespace dpsketch

#endif  // DPSKETCH_METRICS_H_
