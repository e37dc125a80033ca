// Copyright 2026 The hpo Authors.
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

#include <chrono>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hpo/algorithm.hpp"
#include "hpo/json_codec.hpp"
#include "hpo/param_space.hpp"

namespace hpo {

/// A configuration problem. `field` is a dotted path such as
/// "parameters[1].range"; `line` is set for syntax errors.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& detail, std::size_t line = 0);
  const std::string& field() const { return field_; }
  std::size_t line() const { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

struct AlgorithmSpec {
  std::string name;
  Json options = Json::object();
};

struct RunConfig {
  std::vector<ParameterDef> parameters;
  AlgorithmSpec algorithm;
  bool lower_is_better = true;
  std::string command;
  std::size_t max_concurrent = 1;
  std::vector<std::string> resources;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  bool dashboard = true;
  int port = 8880;
  std::chrono::milliseconds poll_interval{250};
  std::optional<std::chrono::milliseconds> trial_timeout;
  std::string dashboard_dir;
};

/// Parses and validates a run configuration document. Unknown keys are
/// errors.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

/// Builds an algorithm from its spec; `field` prefixes error paths.
std::unique_ptr<Algorithm> make_algorithm(const AlgorithmSpec& spec, std::span<const ParameterDef> defs,
                                          const std::string& field = "algorithm");

}  // namespace hpo
