/*
 * Copyright 2026 The wumrsi Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace wumrsi::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitStage = 1,    // a processing stage failed
  kExitUsage = 2,    // bad flags or configuration
  kExitFlagged = 3,  // too many voxels flagged or failed
};

/// Misuse detected by a command (missing input path, unknown method).
class UsageError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

struct CommandOutcome {
  int exit_code = kExitOk;
  std::vector<std::string> outputs;  // relative to the output directory
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
};

using Command = CommandOutcome (*)(const RunConfig &, const std::filesystem::path &, std::ostream &);

CommandOutcome cmd_simulate(const RunConfig &cfg, const std::filesystem::path &out, std::ostream &log);
CommandOutcome cmd_remove_nuisance(const RunConfig &cfg, const std::filesystem::path &out, std::ostream &log);
CommandOutcome cmd_fit(const RunConfig &cfg, const std::filesystem::path &out, std::ostream &log);
CommandOutcome cmd_qsm(const RunConfig &cfg, const std::filesystem::path &out, std::ostream &log);
CommandOutcome cmd_mwf(const RunConfig &cfg, const std::filesystem::path &out, std::ostream &log);
CommandOutcome cmd_eval(const RunConfig &cfg, const std::filesystem::path &out, std::ostream &log);
CommandOutcome cmd_export_dataset(const RunConfig &cfg, const std::filesystem::path &out, std::ostream &log);

[[nodiscard]] Command find_command(const std::string &name);
[[nodiscard]] const std::vector<std::string> &command_names();

/// Runs a command in cfg.out: writes config.yaml and run_meta.json, maps
/// exceptions to exit codes and reports errors on `err`.
int run_command(const std::string &name, const RunConfig &cfg, std::ostream &log, std::ostream &err);

}  // namespace wumrsi::cli
