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

#ifndef DPSKETCH_EXPERIMENT_H_
#define DPSKETCH_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dpsketch/data_ingest.h"
#include "dpsketch/federated.h"

namespace dpsketch {

struct DatasetConfig {
  std::string kind = "blobs";  // blobs | linear | mnist
  std::filesystem::path path;         // mnist: IDX image file
  std::filesystem::path labels_path;  // mnist: IDX label file
  int64_t samples = 2000;
  int64_t input_dim = 20;
  int64_t classes = 10;
  double separation = 10.0;
  double noise = 1.0;
  uint64_t seed = 1;
  double test_fraction = 0.2;
};

struct PartitionConfig {
  PartitionKind kind = PartitionKind::kIid;
  double alpha = 0.5;
};

struct SweepAxis {
  std::string key;                  // dotted config key
  std::vector<std::string> values;  // scalar text, applied like config values
};

struct ExperimentSpec {
  RunConfig run;
  DatasetConfig dataset;
  PartitionConfig partition;
  // 0 leaves (k, m, rounds) alone; 1-5 selects a step of the compression
  // ladder, see ApplyCompressionLevel.
  int64_t compression_level = 0;
  std::vector<SweepAxis> sweep;
  int64_t repetitions = 1;
  std::filesystem::path output_dir = "results";
};

// Parses a YAML document. An empty document yields the defaults: epsilon 4,
// delta 1e-5, C 1.5, gamma 0.9, theta 0.5, sigma_b 0.1, eta_C 0.01, a 5 x
// 500000 sketch and k = 50000. Unknown keys are rejected. Errors are
// ConfigError with the line number or the offending field name.
ExperimentSpec ParseConfigText(std::string_view text,
                               std::string_view source = "<config>");
ExperimentSpec ParseConfig(const std::filesystem::path& path);

// Sets one dotted key from scalar text, e.g. ("privacy.epsilon", "2").
void SetField(ExperimentSpec& spec, std::string_view key,
              std::string_view value);

// Every dotted key SetField accepts.
const std::vector<std::string>& KnownConfigKeys();

// Compression ladder: sketch variants scale k by {50,32,25,18,12}/50 and m by
// {500,300,200,120,80}/500 at levels 1..5; dense variants divide the round
// count by the level.
RunConfig ApplyCompressionLevel(const RunConfig& base, int64_t level);

// Checks that do need the data shape: k against the model dimension and the
// client count against the training set size.
void ValidateAgainstData(const ExperimentSpec& spec);

struct MaterializedRun {
  std::string name;  // e.g. "cell002_rep1"
  int64_t cell = 0;
  int64_t repetition = 0;
  std::vector<std::pair<std::string, std::string>> assignments;
  ExperimentSpec spec;  // fully applied, sweep cleared
};

// Cartesian product of the sweep axes (or just the base config when
// include_sweep is false) times the repetitions. Run seeds derive from the
// master seed and the repetition index only, so cells are paired.
std::vector<MaterializedRun> MaterializeRuns(const ExperimentSpec& spec,
                                             bool include_sweep);

struct PreparedData {
  Dataset train;
  Dataset test;
};
PreparedData PrepareData(const DatasetConfig& config);

struct RunStatus {
  std::string name;
  bool ok = false;
  std::string error;
  std::filesystem::path records_path;
};

struct ExperimentReport {
  std::vector<RunStatus> runs;
  std::filesystem::path summary_path;
  bool all_ok() const;
};

// Executes every materialized run, writing <out>/runs/<name>.jsonl (one
// RoundRecord per line), <out>/runs/<name>.meta.json and <out>/summary.csv
// (final accuracy mean and std per sweep cell). Record files are written to
// a temporary name and renamed when complete. Runs execute on
// `workers` threads; 0 reads DPSFL_WORKERS from the environment.
ExperimentReport RunExperiments(const ExperimentSpec& spec, bool include_sweep,
                                std::ostream& log, int workers = 0);

}  // namespace dpsketch

#endif  // DPSKETCH_EXPERIMENT_H_
