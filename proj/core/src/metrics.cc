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

#include "dpsketch/metrics.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>

#include "dpsketch/errors.h"

namespace dpsketch {
namespace {

using Json = nlohmann::ordered_json;

// JSON has no NaN or infinity; a diverged run writes null and reads NaN.
Json Number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double ReadNumber(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return v.get<double>();
}

Json Optional(const std::optional<double>& v) {
  return v ? Number(*v) : Json(nullptr);
}

std::optional<double> ReadOptional(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

}  // namespace

std::string ToJsonLine(const RoundRecord& r) {
  Json j;
  j["t"] = r.round;
  j["loss"] = Number(r.loss);
  j["acc"] = Optional(r.accuracy);
  j["C"] = Number(r.threshold);
  j["b_bar"] = Optional(r.b_bar);
  j["bit_raw_mean"] = Optional(r.bit_raw_mean);
  j["rho_spent"] = Number(r.rho_spent);
  j["epsilon_equiv"] = Optional(r.epsilon_equiv);
  j["bytes_up"] = r.bytes_up;
  j["bytes_down"] = r.bytes_down;
  j["CL"] = Number(r.compression_level);
  j["status"] = r.status;
  return j.dump();
}

RoundRecord ParseJsonLine(std::string_view line) {
  Json j;
  try {
    j = Json::parse(line);
    RoundRecord r;
    r.round = j.at("t").get<int64_t>();
    r.loss = ReadNumber(j, "loss");
    r.accuracy = ReadOptional(j, "acc");
    r.threshold = ReadNumber(j, "C");
    r.b_bar = ReadOptional(j, "b_bar");
    r.bit_raw_mean = ReadOptional(j, "bit_raw_mean");
    r.rho_spent = ReadNumber(j, "rho_spent");
    r.epsilon_equiv = ReadOptional(j, "epsilon_equiv");
    r.bytes_up = j.at("bytes_up").get<int64_t>();
    r.bytes_down = j.at("bytes_down").get<int64_t>();
    r.compression_level = ReadNumber(j, "CL");
    r.status = j.at("status").get<std::string>();
    return r;
  } catch (const Json::exception& e) {
    throw IngestError(std::string("malformed round record: ") + e.what());
  }
}

void WriteRecords(const std::filesystem::path& path,
                  std::span<const RoundRecord> records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IngestError(path.string() + ": cannot open for writing");
  for (const auto& r : records) out << ToJsonLine(r) << '\n';
  if (!out) throw IngestError(path.string() + ": write failed");
}

std::vector<RoundRecord> ReadRecords(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError(path.string() + ": cannot open");
  std::vector<RoundRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) records.push_back(ParseJsonLine(line));
  }
  return records;
}

ClientTraffic SketchClientTraffic(int64_t rows, int64_t columns, int64_t k,
                                  bool sends_bit) {
  constexpr int64_t kHeader = 32;
  constexpr int64_t kSparseEntry = 4 + 8;
  return {kHeader + 8 * rows * columns + (sends_bit ? 8 : 0),
          kSparseEntry * k};
}

ClientTraffic DenseClientTraffic(int64_t dimension) {
  return {8 * dimension, 8 * dimension};
}

double CompressionLevel(double baseline_bytes, double communication_bytes) {
  if (!(communication_bytes > 0.0)) {
    throw ArgumentError("communication cost must be positive");
  }
  return baseline_bytes / communication_bytes;
}

MeanStd ComputeMeanStd(std::span<const double> values) {
  MeanStd out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return out;
  double sq = 0.0;
  for (double v : values) sq += (v - out.mean) * (v - out.mean);
  out.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
  return out;
}

}  // namespace dpsketch
