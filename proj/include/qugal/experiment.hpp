// Copyright 2026 The qugal Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment harness: flat key=value configuration, dispatch over the named
// experiments, and trace / summary serialization.

#ifndef QUGAL_EXPERIMENT_HPP
#define QUGAL_EXPERIMENT_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qugal/error.hpp"

namespace qugal {

class UnknownExperimentError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class OutputError : public Error {
 public:
  using Error::Error;
};

using ConfigValues = std::map<std::string, std::string>;

struct ExperimentConfig {
  std::string experiment;
  ConfigValues values;
};

const std::vector<std::string>& experiment_names();

/// Keys accepted in config files and --set overrides.
const std::vector<std::string>& config_keys();

/// "key = value" lines; '#' starts a comment. Unknown keys are rejected.
ConfigValues parse_config_text(const std::string& text, const std::string& origin = "<config>");
ConfigValues load_config_file(const std::filesystem::path& path);

/// Applies one "key=value" override.
void apply_override(ConfigValues& values, const std::string& assignment);

inline constexpr const char* kTraceHeader = "round,loss,fidelity,gen_regret_rate,disc_regret_rate";

struct RunRecord {
  std::string experiment;
  std::string trace_csv;
  nlohmann::ordered_json summary;
};

RunRecord run_experiment(const ExperimentConfig& config);

/// Writes trace.csv and summary.json, creating the directory if needed.
void write_run(const RunRecord& record, const std::filesystem::path& out_dir);

/// 17 significant digits, locale independent.
std::string format_number(double v);

/// Checks a summary against the documented layout; returns the problems found.
std::vector<std::string> check_summary_schema(const nlohmann::ordered_json& summary);

std::string version_string();

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitConfig = 3,
  kExitUnknownExperiment = 4,
  kExitStateFile = 5,
  kExitDimension = 6,
  kExitNumerical = 7,
  kExitOutput = 8,
};

/// Maps a thrown exception to its exit code.
int exit_code_for(const std::exception& e);

}  // namespace qugal

#endif  // QUGAL_EXPERIMENT_HPP
