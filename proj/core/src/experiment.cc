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

#include "dpsketch/experiment.h"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <thread>

#include "dpsketch/errors.h"
#include "dpsketch/random.h"

namespace dpsketch {
namespace {

using Setter = std::function<void(ExperimentSpec&, std::string_view)>;

constexpr int64_t kLadderK[] = {50, 32, 25, 18, 12};
constexpr int64_t kLadderM[] = {500, 300, 200, 120, 80};

[[noreturn]] void FieldError(std::string_view key, const std::string& what) {
  throw ConfigError("config field '" + std::string(key) + "': " + what);
}

int64_t ToInt(std::string_view key, std::string_view text) {
  int64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    FieldError(key, "expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

uint64_t ToU64(std::string_view key, std::string_view text) {
  uint64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    FieldError(key, "expected an unsigned integer, got '" + std::string(text) + "'");
  }
  return value;
}

double ToDouble(std::string_view key, std::string_view text) {
  const std::string owned(text);
  char* end = nullptr;
  const double value = std::strtod(owned.c_str(), &end);
  if (owned.empty() || end != owned.c_str() + owned.size() || !std::isfinite(value)) {
    FieldError(key, "expected a finite number, got '" + owned + "'");
  }
  return value;
}

template <typename Parse>
auto Wrap(std::string_view key, Parse parse) {
  try {
    return parse();
  } catch (const ArgumentError& e) {
    FieldError(key, e.what());
  }
}

const std::map<std::string, Setter, std::less<>>& Setters() {
  static const auto* setters = new std::map<std::string, Setter, std::less<>>{
      {"variant",
       [](ExperimentSpec& s, std::string_view v) {
         s.run.variant = Wrap("variant", [&] { return ParseVariant(v); });
       }},
      {"rounds", [](ExperimentSpec& s, std::string_view v) { s.run.rounds = ToInt("rounds", v); }},
      {"seed", [](ExperimentSpec& s, std::string_view v) { s.run.seed = ToU64("seed", v); }},
      {"repetitions",
       [](ExperimentSpec& s, std::string_view v) { s.repetitions = ToInt("repetitions", v); }},
      {"output_dir",
       [](ExperimentSpec& s, std::string_view v) { s.output_dir = std::string(v); }},
      {"clients.total",
       [](ExperimentSpec& s, std::string_view v) {
         s.run.total_clients = ToInt("clients.total", v);
       }},
      {"clients.per_round",
       [](ExperimentSpec& s, std::string_view v) {
         s.run.clients_per_round = ToInt("clients.per_round", v);
       }},
      {"optimizer.learning_rate",
       [](ExperimentSpec& s, std::string_view v) {
         s.run.learning_rate = ToDouble("optimizer.learning_rate", v);
       }},
      {"optimizer.momentum",
       [](ExperimentSpec& s, std::string_view v) {
         s.run.momentum = ToDouble("optimizer.momentum", v);
       }},
      {"optimizer.batch_size",
       [](ExperimentSpec& s, std::string_view v) {
         s.run.batch_size = ToInt("optimizer.batch_size", v);
       }},
      {"sketch.rows",
       [](ExperimentSpec& s, std::string_view v) { s.run.sketch_rows = ToInt("sketch.rows", v); }},
      {"sketch.columns",
       [](ExperimentSpec& s, std::string_view v) {
         s.run.sketch_columns = ToInt("sketch.columns", v);
       }},
      {"sketch.k", [](ExperimentSpec& s, std::string_view v) { s.run.topk = ToInt("sketch.k", v); }},
      {"clipping.C",
       [](ExperimentSpec& s, std::string_view v) {
         s.run.clipping.threshold = ToDouble("clipping.C", v);
       }},
      {"clipping.gamma",
       [](ExperimentSpec& s, std::string_view v) {
         s.run.clipping.gamma = ToDouble("clipping.gamma", v);
       }},
      {"clipping.theta",
       [](ExperimentSpec& s, std::string_view v) {
         s.run.clipping.theta = ToDouble("clipping.theta", v);
       }},
      {"clipping.sigma_b",
       [](ExperimentSpec& s, std::string_view v) {
         s.run.clipping.sigma_b = ToDouble("clipping.sigma_b", v);
       }},
      {"clipping.eta_C",
       [](ExperimentSpec& s, std::string_view v) {
         s.run.clipping.eta_c = ToDouble("clipping.eta_C", v);
       }},
      {"privacy.epsilon",
       [](ExperimentSpec& s, std::string_view v) {
         s.run.epsilon = ToDouble("privacy.epsilon", v);
       }},
      {"privacy.delta",
       [](ExperimentSpec& s, std::string_view v) { s.run.delta = ToDouble("privacy.delta", v); }},
      {"privacy.bit_accounting",
       [](ExperimentSpec& s, std::string_view v) {
         s.run.bit_accounting =
             Wrap("privacy.bit_accounting", [&] { return ParseBitAccounting(v); });
       }},
      {"privacy.budget_rounds",
       [](ExperimentSpec& s, std::string_view v) {
         s.run.budget_rounds = ToInt("privacy.budget_rounds", v);
       }},
      {"privacy.noise_scale",
       [](ExperimentSpec& s, std::string_view v) {
         s.run.noise_scale = ToDouble("privacy.noise_scale", v);
       }},
      {"model.kind",
       [](ExperimentSpec& s, std::string_view v) {
         s.run.model_kind = Wrap("model.kind", [&] { return ParseModelKind(v); });
       }},
      {"model.hidden",
       [](ExperimentSpec& s, std::string_view v) { s.run.hidden = ToInt("model.hidden", v); }},
      {"dataset.kind",
       [](ExperimentSpec& s, std::string_view v) {
         if (v != "blobs" && v != "linear" && v != "mnist") {
           FieldError("dataset.kind", "expected blobs, linear or mnist, got '" +
                                          std::string(v) + "'");
         }
         s.dataset.kind = std::string(v);
       }},
      {"dataset.path",
       [](ExperimentSpec& s, std::string_view v) { s.dataset.path = std::string(v); }},
      {"dataset.labels_path",
       [](ExperimentSpec& s, std::string_view v) { s.dataset.labels_path = std::string(v); }},
      {"dataset.samples",
       [](ExperimentSpec& s, std::string_view v) {
         s.dataset.samples = ToInt("dataset.samples", v);
       }},
      {"dataset.input_dim",
       [](ExperimentSpec& s, std::string_view v) {
         s.dataset.input_dim = ToInt("dataset.input_dim", v);
       }},
      {"dataset.classes",
       [](ExperimentSpec& s, std::string_view v) {
         s.dataset.classes = ToInt("dataset.classes", v);
       }},
      {"dataset.separation",
       [](ExperimentSpec& s, std::string_view v) {
         s.dataset.separation = ToDouble("dataset.separation", v);
       }},
      {"dataset.noise",
       [](ExperimentSpec& s, std::string_view v) {
         s.dataset.noise = ToDouble("dataset.noise", v);
       }},
      {"dataset.seed",
       [](ExperimentSpec& s, std::string_view v) { s.dataset.seed = ToU64("dataset.seed", v); }},
      {"dataset.test_fraction",
       [](ExperimentSpec& s, std::string_view v) {
         s.dataset.test_fraction = ToDouble("dataset.test_fraction", v);
       }},
      {"partition.kind",
       [](ExperimentSpec& s, std::string_view v) {
         s.partition.kind = Wrap("partition.kind", [&] { return ParsePartitionKind(v); });
       }},
      {"partition.alpha",
       [](ExperimentSpec& s, std::string_view v) {
         s.partition.alpha = ToDouble("partition.alpha", v);
       }},
      {"metrics.baseline_bytes",
       [](ExperimentSpec& s, std::string_view v) {
         s.run.baseline_bytes = ToDouble("metrics.baseline_bytes", v);
       }},
      {"diagnostics.delta_s",
       [](ExperimentSpec& s, std::string_view v) {
         s.run.diagnostic_delta_s = ToDouble("diagnostics.delta_s", v);
       }},
      {"compression.level",
       [](ExperimentSpec& s, std::string_view v) {
         s.compression_level = ToInt("compression.level", v);
       }},
  };
  return *setters;
}

int Line(const YAML::Node& node) { return node.Mark().line + 1; }

void Flatten(const YAML::Node& node, const std::string& prefix,
             ExperimentSpec& spec, std::string_view source) {
  for (const auto& entry : node) {
    const std::string name = entry.first.as<std::string>();
    const std::string key = prefix.empty() ? name : prefix + "." + name;
    const YAML::Node& value = entry.second;
    if (prefix.empty() && name == "sweep") {
      if (value.IsNull()) continue;
      if (!value.IsMap()) {
        throw ConfigError(std::string(source) + ":" + std::to_string(Line(value)) +
                          ": 'sweep' must map config keys to value lists");
      }
      for (const auto& axis : value) {
        SweepAxis sweep_axis;
        sweep_axis.key = axis.first.as<std::string>();
        if (!Setters().contains(sweep_axis.key)) {
          throw ConfigError(std::string(source) + ":" +
                            std::to_string(Line(axis.first)) +
                            ": unknown sweep key '" + sweep_axis.key + "'");
        }
        if (!axis.second.IsSequence() || axis.second.size() == 0) {
          throw ConfigError(std::string(source) + ":" +
                            std::to_string(Line(axis.second)) + ": sweep axis '" +
                            sweep_axis.key + "' needs a non-empty list");
        }
        for (const auto& v : axis.second) {
          if (!v.IsScalar()) {
            throw ConfigError(std::string(source) + ":" + std::to_string(Line(v)) +
                              ": sweep values must be scalars");
          }
          sweep_axis.values.push_back(v.Scalar());
        }
        spec.sweep.push_back(std::move(sweep_axis));
      }
      continue;
    }
    if (value.IsMap()) {
      Flatten(value, key, spec, source);
      continue;
    }
    const auto setter = Setters().find(key);
    if (setter == Setters().end()) {
      throw ConfigError(std::string(source) + ":" + std::to_string(Line(entry.first)) +
                        ": unknown config key '" + key + "'");
    }
    if (!value.IsScalar()) {
      throw ConfigError(std::string(source) + ":" + std::to_string(Line(value)) +
                        ": config key '" + key + "' needs a scalar value");
    }
    setter->second(spec, value.Scalar());
  }
}

void ValidateSpec(const ExperimentSpec& spec) {
  if (spec.repetitions < 1) FieldError("repetitions", "must be >= 1");
  if (spec.compression_level < 0 || spec.compression_level > 5) {
    FieldError("compression.level", "must lie in 0..5");
  }
  if (spec.dataset.samples < 1) FieldError("dataset.samples", "must be >= 1");
  if (spec.dataset.input_dim < 1) FieldError("dataset.input_dim", "must be >= 1");
  if (spec.dataset.classes < 1) FieldError("dataset.classes", "must be >= 1");
  if (!(spec.dataset.test_fraction > 0.0 && spec.dataset.test_fraction < 1.0)) {
    FieldError("dataset.test_fraction", "must lie in (0, 1)");
  }
  if (!(spec.partition.alpha > 0.0)) FieldError("partition.alpha", "must be > 0");
  if (spec.dataset.kind == "mnist" &&
      (spec.dataset.path.empty() || spec.dataset.labels_path.empty())) {
    FieldError("dataset.path", "mnist needs dataset.path and dataset.labels_path");
  }
  try {
    spec.run.Validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("config field ") + e.what());
  }
}

std::string FormatNumber(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string CellName(int64_t cell, int64_t rep) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "cell%03lld_rep%lld", static_cast<long long>(cell),
                static_cast<long long>(rep));
  return buf;
}

std::string DatasetKey(const DatasetConfig& c) {
  std::ostringstream key;
  key << c.kind << '|' << c.path << '|' << c.labels_path << '|' << c.samples << '|'
      << c.input_dim << '|' << c.classes << '|' << FormatNumber(c.separation) << '|'
      << FormatNumber(c.noise) << '|' << c.seed << '|' << FormatNumber(c.test_fraction);
  return key.str();
}

void WriteMetadata(const std::filesystem::path& path, const MaterializedRun& run,
                   const RunResult& result) {
  nlohmann::ordered_json j;
  const RunConfig& rc = run.spec.run;
  const RunMetadata& m = result.metadata;
  j["name"] = run.name;
  j["variant"] = std::string(VariantName(rc.variant));
  j["seed"] = rc.seed;
  j["dimension"] = m.dimension;
  j["sketch"] = {{"rows", m.sketch.rows},
                 {"columns", m.sketch.columns},
                 {"k", rc.topk},
                 {"master_seed", m.sketch.master_seed}};
  j["rho_total"] = m.rho_total;
  j["per_round_rho"] = m.per_round_rho;
  j["bit_rho_per_round"] = m.bit_rho_per_round;
  j["bit_rho_reported"] = m.bit_rho_reported;
  j["bit_accounting"] = std::string(BitAccountingName(rc.bit_accounting));
  j["initial_sigma"] = m.initial_sigma;
  j["noise_impact"] = m.noise_impact ? nlohmann::ordered_json(*m.noise_impact)
                                     : nlohmann::ordered_json(nullptr);
  j["rounds_requested"] = rc.rounds;
  j["rounds_completed"] = m.rounds_completed;
  j["stopped_early"] = m.stopped_early;
  j["total_bytes"] = m.total_bytes;
  auto& assignments = j["assignments"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : run.assignments) assignments[k] = v;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << j.dump(2) << '\n';
}

int WorkersFromEnv() {
  const char* env = std::getenv("DPSFL_WORKERS");
  if (env == nullptr) return 1;
  const int value = std::atoi(env);
  return value > 0 ? value : 1;
}

}  // namespace

const std::vector<std::string>& KnownConfigKeys() {
  static const auto* keys = [] {
    auto* out = new std::vector<std::string>;
    for (const auto& [k, _] : Setters()) out->push_back(k);
    return out;
  }();
  return *keys;
}

void SetField(ExperimentSpec& spec, std::string_view key,
              std::string_view value) {
  const auto setter = Setters().find(key);
  if (setter == Setters().end()) {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
  setter->second(spec, value);
}

ExperimentSpec ParseConfigText(std::string_view text, std::string_view source) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(std::string(source) + ":" + std::to_string(e.mark.line + 1) +
                      ": parse error: " + e.msg);
  }
  ExperimentSpec spec;
  if (root.IsNull()) {
    ValidateSpec(spec);
    return spec;
  }
  if (!root.IsMap()) {
    throw ConfigError(std::string(source) + ":" + std::to_string(Line(root)) +
                      ": top level must be a mapping");
  }
  try {
    Flatten(root, "", spec, source);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string(source) + ":" + std::to_string(e.mark.line + 1) +
                      ": " + e.msg);
  }
  ValidateSpec(spec);
  return spec;
}

ExperimentSpec ParseConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open config");
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfigText(text.str(), path.string());
}

RunConfig ApplyCompressionLevel(const RunConfig& base, int64_t level) {
  if (level == 0) return base;
  if (level < 1 || level > 5) {
    throw ConfigError("compression.level must lie in 1..5");
  }
  RunConfig out = base;
  const auto step = static_cast<size_t>(level - 1);
  if (UsesSketch(base.variant)) {
    out.topk = std::max<int64_t>(
        1, static_cast<int64_t>(std::llround(static_cast<double>(base.topk * kLadderK[step]) /
                                             static_cast<double>(kLadderK[0]))));
    out.sketch_columns = std::max<int64_t>(
        2, static_cast<int64_t>(
               std::llround(static_cast<double>(base.sketch_columns * kLadderM[step]) /
                            static_cast<double>(kLadderM[0]))));
  } else {
    out.rounds = std::max<int64_t>(1, base.rounds / level);
  }
  return out;
}

void ValidateAgainstData(const ExperimentSpec& spec) {
  Dataset shape;
  int64_t rows = 0;
  if (spec.dataset.kind == "mnist") {
    const Dataset loaded = LoadIdx(spec.dataset.path, spec.dataset.labels_path);
    shape.input_dim = loaded.input_dim;
    shape.num_classes = loaded.num_classes;
    rows = loaded.size();
  } else {
    shape.input_dim = spec.dataset.input_dim;
    shape.num_classes = spec.dataset.kind == "blobs" ? spec.dataset.classes : 0;
    rows = spec.dataset.samples;
  }
  const RunConfig run = ApplyCompressionLevel(spec.run, spec.compression_level);
  const int64_t d = ArchitectureFor(run, shape).ParameterCount();
  if (UsesSketch(run.variant) && run.topk > d) {
    FieldError("sketch.k", std::to_string(run.topk) +
                               " exceeds the model dimension " + std::to_string(d));
  }
  const auto held_out = static_cast<int64_t>(
      std::llround(spec.dataset.test_fraction * static_cast<double>(rows)));
  if (run.total_clients > rows - std::max<int64_t>(held_out, 1)) {
    FieldError("clients.total", "more clients than training rows");
  }
}

std::vector<MaterializedRun> MaterializeRuns(const ExperimentSpec& spec,
                                             bool include_sweep) {
  std::vector<std::vector<std::pair<std::string, std::string>>> cells = {{}};
  if (include_sweep) {
    for (const auto& axis : spec.sweep) {
      std::vector<std::vector<std::pair<std::string, std::string>>> next;
      for (const auto& cell : cells) {
        for (const auto& v : axis.values) {
          auto extended = cell;
          extended.emplace_back(axis.key, v);
          next.push_back(std::move(extended));
        }
      }
      cells = std::move(next);
    }
  }
  std::vector<MaterializedRun> runs;
  for (size_t c = 0; c < cells.size(); ++c) {
    ExperimentSpec cell_spec = spec;
    cell_spec.sweep.clear();
    for (const auto& [k, v] : cells[c]) SetField(cell_spec, k, v);
    ValidateSpec(cell_spec);
    cell_spec.run = ApplyCompressionLevel(cell_spec.run, cell_spec.compression_level);
    cell_spec.compression_level = 0;
    for (int64_t r = 0; r < spec.repetitions; ++r) {
      MaterializedRun run;
      run.cell = static_cast<int64_t>(c);
      run.repetition = r;
      run.name = CellName(run.cell, r);
      run.assignments = cells[c];
      run.spec = cell_spec;
      run.spec.repetitions = 1;
      run.spec.run.seed = DeriveSeed(spec.run.seed, {static_cast<uint64_t>(r)});
      runs.push_back(std::move(run));
    }
  }
  return runs;
}

PreparedData PrepareData(const DatasetConfig& config) {
  Dataset full;
  if (config.kind == "mnist") {
    full = LoadIdx(config.path, config.labels_path);
  } else {
    SyntheticOptions options;
    options.kind = ParseSyntheticKind(config.kind);
    options.num_samples = config.samples;
    options.input_dim = config.input_dim;
    options.num_classes = config.classes;
    options.separation = config.separation;
    options.noise = config.noise;
    options.seed = config.seed;
    full = Synthesize(options);
  }
  TrainTestSplit split =
      SplitTrainTest(full, config.test_fraction, DeriveSeed(config.seed, {kTagSplit}));
  return {std::move(split.train), std::move(split.test)};
}

bool ExperimentReport::all_ok() const {
  return std::all_of(runs.begin(), runs.end(), [](const RunStatus& r) { return r.ok; });
}

ExperimentReport RunExperiments(const ExperimentSpec& spec, bool include_sweep,
                                std::ostream& log, int workers) {
  const std::vector<MaterializedRun> runs = MaterializeRuns(spec, include_sweep);
  const std::filesystem::path run_dir = spec.output_dir / "runs";
  std::filesystem::create_directories(run_dir);

  std::map<std::string, PreparedData> data;
  for (const auto& run : runs) {
    const std::string key = DatasetKey(run.spec.dataset);
    if (!data.contains(key)) data.emplace(key, PrepareData(run.spec.dataset));
  }

  ExperimentReport report;
  report.runs.resize(runs.size());
  std::mutex log_mutex;
  std::atomic<size_t> next{0};
  const auto worker = [&] {
    for (size_t i = next++; i < runs.size(); i = next++) {
      const MaterializedRun& run = runs[i];
      RunStatus& status = report.runs[i];
      status.name = run.name;
      status.records_path = run_dir / (run.name + ".jsonl");
      try {
        const PreparedData& prepared = data.at(DatasetKey(run.spec.dataset));
        const ClientPartition partition = Partition(
            prepared.train, run.spec.run.total_clients, run.spec.partition.kind,
            run.spec.partition.alpha, DeriveSeed(run.spec.run.seed, {kTagPartition}));
        const RunResult result =
            Run(run.spec.run, prepared.train, partition, prepared.test);
        const std::filesystem::path tmp = status.records_path.string() + ".tmp";
        WriteRecords(tmp, result.records);
        std::filesystem::rename(tmp, status.records_path);
        WriteMetadata(run_dir / (run.name + ".meta.json"), run, result);
        status.ok = true;
        std::lock_guard lock(log_mutex);
        log << run.name << ": " << result.records.size() << " rounds";
        if (!result.records.empty() && result.records.back().accuracy) {
          log << ", final acc " << *result.records.back().accuracy;
        }
        if (result.metadata.stopped_early) log << " (privacy budget exhausted)";
        log << '\n';
      } catch (const std::exception& e) {
        status.ok = false;
        status.error = e.what();
        std::lock_guard lock(log_mutex);
        log << run.name << ": FAILED: " << e.what() << '\n';
      }
    }
  };
  const int threads = std::max(1, workers > 0 ? workers : WorkersFromEnv());
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  // Summary rows come from the record files as written.
  report.summary_path = spec.output_dir / "summary.csv";
  std::ofstream summary(report.summary_path, std::ios::binary | std::ios::trunc);
  bool variant_swept = false;
  summary << "cell";
  if (include_sweep) {
    for (const auto& axis : spec.sweep) {
      summary << ',' << axis.key;
      variant_swept = variant_swept || axis.key == "variant";
    }
  }
  if (!variant_swept) summary << ",variant";
  summary << ",repetitions,completed,final_acc_mean,final_acc_std,final_loss_mean\n";
  for (size_t i = 0; i < runs.size();) {
    const int64_t cell = runs[i].cell;
    std::vector<double> accs;
    std::vector<double> losses;
    int64_t reps = 0;
    const size_t first = i;
    for (; i < runs.size() && runs[i].cell == cell; ++i, ++reps) {
      if (!report.runs[i].ok) continue;
      const auto records = ReadRecords(report.runs[i].records_path);
      if (records.empty()) continue;
      if (records.back().accuracy) accs.push_back(*records.back().accuracy);
      losses.push_back(records.back().loss);
    }
    summary << cell;
    for (const auto& [k, v] : runs[first].assignments) summary << ',' << v;
    const MeanStd acc = ComputeMeanStd(accs);
    const MeanStd loss = ComputeMeanStd(losses);
    if (!variant_swept) summary << ',' << VariantName(runs[first].spec.run.variant);
    summary << ',' << reps << ','
            << losses.size() << ',' << (accs.empty() ? "" : FormatNumber(acc.mean)) << ','
            << (accs.empty() ? "" : FormatNumber(acc.stddev)) << ','
            << (losses.empty() ? "" : FormatNumber(loss.mean)) << '\n';
  }
  return report;
}

}  // namespace dpsketch
