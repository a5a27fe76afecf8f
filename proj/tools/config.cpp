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

#include "config.hpp"

#include <charconv>
#include <fstream>

#include "lossbound/error.hpp"

namespace lossbound::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

long long parse_int(const std::string& text, const std::string& flag) {
  long long value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("--" + flag + ": '" + text + "' is not an integer");
  }
  return value;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path.string() + ":" + std::to_string(line_no) +
                       ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw UsageError(path.string() + ":" + std::to_string(line_no) +
                       ": empty key");
    }
    entries.emplace_back(std::move(key), std::move(value));
  }
  return entries;
}

void write_config_file(const std::filesystem::path& path,
                       const ExperimentConfig& config) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "# resolved configuration for 'lossbound " << config.command << "'\n";
  for (const auto& [key, value] : config.entries) {
    out << key << " = " << value << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<long long> parse_int_list(const std::vector<std::string>& tokens,
                                      const std::string& flag) {
  std::vector<long long> values;
  for (const auto& raw : tokens) {
    const std::string token = trim(raw);
    if (token.empty()) continue;
    const auto colon = token.find(':');
    if (colon == std::string::npos) {
      values.push_back(parse_int(token, flag));
      continue;
    }
    const long long lo = parse_int(token.substr(0, colon), flag);
    const long long hi = parse_int(token.substr(colon + 1), flag);
    if (hi < lo) {
      throw UsageError("--" + flag + ": empty range '" + token + "'");
    }
    for (long long v = lo; v <= hi; ++v) values.push_back(v);
  }
  if (values.empty()) throw UsageError("--" + flag + ": empty list");
  return values;
}

}  // namespace lossbound::cli
