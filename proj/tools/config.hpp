// Copyright 2026 The lossbound Authors.
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

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lossbound::cli {

/// Bad flags, config keys or value lists. Maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Resolved key/value configuration of one command, in declaration order.
///
/// File syntax, one entry per line:
///
///   # comment
///   negatives = 1,2,5,20
///   loss = cce
///
/// Keys are the command's long flag names without the leading dashes.
struct ExperimentConfig {
  std::string command;
  std::vector<std::pair<std::string, std::string>> entries;
};

std::vector<std::pair<std::string, std::string>> read_config_file(
    const std::filesystem::path& path);

void write_config_file(const std::filesystem::path& path,
                       const ExperimentConfig& config);

/// Comma-separated integers with optional inclusive ranges, e.g. "1,3:5" ->
/// {1, 3, 4, 5}. Throws UsageError naming `flag` on malformed input.
std::vector<long long> parse_int_list(const std::vector<std::string>& tokens,
                                      const std::string& flag);

}  // namespace lossbound::cli
