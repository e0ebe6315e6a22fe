// Copyright 2026 The qmedr Authors.
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
#pragma once

#include <string>
#include <vector>

#include "qmedr/resource_model.hpp"
#include "qmedr/run_config.hpp"

namespace qmedr {

/// Outcome of one CLI command: the JSON report (already written to disk) and
/// the process exit code.
struct CommandResult {
    json report;
    int exitCode = 0;
    std::vector<std::string> files;
};

CommandResult cmd_graph(const std::string &datasetPath, const RunConfig &config,
                        const std::string &outDir);
CommandResult cmd_classical(const std::string &datasetPath, const RunConfig &config,
                            const std::string &outDir);
CommandResult cmd_quantum_sim(const std::string &datasetPath, const RunConfig &config,
                              const std::string &outDir);
CommandResult cmd_compare(const std::string &datasetPath, const RunConfig &config,
                          const std::string &outDir);
CommandResult cmd_resources(const std::string &paramsPath, const std::string &outDir);
CommandResult cmd_synth(const std::string &kind, int n, int m, int classes, std::uint64_t seed,
                        const std::string &outPath);

/// Parse a resource parameter file (JSON object keyed by ResourceParams names).
ResourceParams resource_params_from_json(const json &j);
json to_json(const ResourceParams &p);
json to_json(const ResourceReport &r);

/// Serialise with two-space indentation and a trailing newline.
std::string dump_report(const json &j);

} // namespace qmedr
