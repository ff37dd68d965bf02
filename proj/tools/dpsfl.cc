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

// dpsfl: runs federated experiments from a YAML config.
//
//   dpsfl run --config exp.yaml --out results/
//   dpsfl sweep --config sweep.yaml
//   dpsfl validate-config --config exp.yaml
//   dpsfl selftest
//
// Exit codes: 0 success, 1 a run failed, 2 the config is invalid.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dpsketch/errors.h"
#include "dpsketch/experiment.h"
#include "dpsketch/selftest.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRunFailure = 1;
constexpr int kExitConfigError = 2;

struct Overrides {
  std::string config;
  std::string out;
  std::optional<uint64_t> seed;
  std::optional<std::string> variant;
  std::optional<int64_t> rounds;
};

void AddCommonFlags(CLI::App* command, Overrides& o) {
  command->add_option("--config", o.config, "YAML experiment config (empty: defaults)");
  command->add_option("--out", o.out, "Output directory (overrides output_dir)");
  command->add_option("--seed", o.seed, "Master seed");
  command->add_option("--variant", o.variant,
                      "fedavg | dpfl | fetchsgd | dpsfl-nonnoise | dpsfl | dpsfl-ac");
  command->add_option("--rounds", o.rounds, "Number of rounds T");
}

dpsketch::ExperimentSpec LoadSpec(const Overrides& o) {
  dpsketch::ExperimentSpec spec =
      o.config.empty() ? dpsketch::ParseConfigText("") : dpsketch::ParseConfig(o.config);
  if (o.seed) dpsketch::SetField(spec, "seed", std::to_string(*o.seed));
  if (o.variant) dpsketch::SetField(spec, "variant", *o.variant);
  if (o.rounds) dpsketch::SetField(spec, "rounds", std::to_string(*o.rounds));
  if (!o.out.empty()) spec.output_dir = o.out;
  spec.run.Validate();
  dpsketch::ValidateAgainstData(spec);
  return spec;
}

int RunVerb(const Overrides& o, bool include_sweep) {
  dpsketch::ExperimentSpec spec;
  try {
    spec = LoadSpec(o);
    for (const auto& run : dpsketch::MaterializeRuns(spec, include_sweep)) {
      dpsketch::ValidateAgainstData(run.spec);
    }
  } catch (const dpsketch::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const dpsketch::IngestError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitConfigError;
  }
  try {
    const dpsketch::ExperimentReport report =
        dpsketch::RunExperiments(spec, include_sweep, std::cout);
    std::cout << "summary: " << report.summary_path.string() << '\n';
    return report.all_ok() ? kExitOk : kExitRunFailure;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return kExitRunFailure;
  }
}

int ValidateVerb(const Overrides& o) {
  try {
    const dpsketch::ExperimentSpec spec = LoadSpec(o);
    const auto runs = dpsketch::MaterializeRuns(spec, true);
    for (const auto& run : runs) dpsketch::ValidateAgainstData(run.spec);
    std::cout << "ok: " << runs.size() << " run(s)\n";
    return kExitOk;
  } catch (const dpsketch::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
  } catch (const dpsketch::IngestError& e) {
    std::cerr << "data error: " << e.what() << '\n';
  }
  return kExitConfigError;
}

int SelfTestVerb() {
  bool all_passed = true;
  for (const auto& result : dpsketch::RunSelfTests()) {
    std::cout << (result.passed ? "PASS " : "FAIL ") << result.name;
    if (!result.passed) std::cout << ": " << result.detail;
    std::cout << '\n';
    all_passed = all_passed && result.passed;
  }
  return all_passed ? kExitOk : kExitRunFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated learning with private count sketches"};
  app.require_subcommand(1);
  Overrides run_flags;
  Overrides sweep_flags;
  Overrides validate_flags;
  CLI::App* run = app.add_subcommand("run", "Run the base config (sweep ignored)");
  CLI::App* sweep = app.add_subcommand("sweep", "Run every sweep cell");
  CLI::App* validate = app.add_subcommand("validate-config", "Check a config and exit");
  CLI::App* selftest = app.add_subcommand("selftest", "Run the invariant self-tests");
  AddCommonFlags(run, run_flags);
  AddCommonFlags(sweep, sweep_flags);
  AddCommonFlags(validate, validate_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }
  if (*run) return RunVerb(run_flags, false);
  if (*sweep) return RunVerb(sweep_flags, true);
  if (*validate) return ValidateVerb(validate_flags);
  if (*selftest) return SelfTestVerb();
  return kExitConfigError;
}
