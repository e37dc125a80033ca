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


// Deterministic worker used by the end-to-end tests. It reads its trial from
// the server named in the environment, reports a few observations derived
// from the parameters and exits.

#include <CLI11.hpp>

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <iostream>
#include <set>
#include <thread>

#include "hpo/client.hpp"

namespace {

double base_objective(const hpo::Json& params) {
  double acc = 0.0;
  for (const auto& [key, value] : params.items()) {
    if (key.rfind("sherpa_", 0) == 0) continue;
    if (value.is_number()) {
      acc += value.get<double>();
    } else if (value.is_boolean()) {
      acc += value.get<bool>() ? 1.0 : 0.0;
    } else if (value.is_string()) {
      acc += 0.01 * static_cast<double>(value.get<std::string>().size());
    }
  }
  return acc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stub trial worker"};
  int observations = 5;
  int sleep_ms = 0;
  int crash_mod = 0;
  std::vector<int> crash_residues;
  bool honor_stop = false;
  bool use_budget = false;
  std::string ack_log;
  app.add_option("--observations", observations, "Observations to report");
  app.add_option("--sleep-ms", sleep_ms, "Pause before each observation");
  app.add_option("--crash-mod", crash_mod, "Crash when trial_id % crash-mod is a listed residue");
  app.add_option("--crash-residues", crash_residues, "Residues that crash")->delimiter(',');
  app.add_flag("--honor-stop", honor_stop, "Exit early when a stop is requested");
  app.add_flag("--use-budget", use_budget, "Report sherpa_budget observations instead");
  app.add_option("--ack-log", ack_log, "Append 'trial iteration' for every accepted observation");
  CLI11_PARSE(app, argc, argv);

  try {
    hpo::Client client = hpo::Client::from_env();
    const hpo::TrialPayload trial = client.get_trial();

    if (crash_mod > 0) {
      const std::set<int> residues(crash_residues.begin(), crash_residues.end());
      if (residues.count(static_cast<int>(trial.id % crash_mod))) return 3;
    }

    int count = observations;
    if (use_budget && trial.parameters.contains("sherpa_budget")) count = trial.parameters["sherpa_budget"].get<int>();
    const double base = base_objective(trial.parameters);
    for (int i = 0; i < count; ++i) {
      if (sleep_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(sleep_ms));
      if (honor_stop && client.should_stop()) return 0;
      const double objective = base + 1.0 / static_cast<double>(i + 2);
      client.send_metrics(i, objective, {{"loss", objective * 0.5}});
      if (!ack_log.empty()) {
        // One short O_APPEND write per line keeps concurrent workers from interleaving.
        const std::string line = std::to_string(trial.id) + " " + std::to_string(i) + "\n";
        const int fd = ::open(ack_log.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
        if (fd >= 0) {
          [[maybe_unused]] const auto n = ::write(fd, line.data(), line.size());
          ::close(fd);
        }
      }
    }
  } catch (const hpo::Rejected& e) {
    std::cerr << "stub worker: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "stub worker: " << e.what() << '\n';
    return 5;
  }
  return 0;
}
