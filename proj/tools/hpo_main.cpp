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


// hpo: command-line entry point (run, bench, export).

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "hpo/bench.hpp"
#include "hpo/config.hpp"
#include "hpo/local_scheduler.hpp"
#include "hpo/results_io.hpp"
#include "hpo/runner.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitScheduler = 3;

bool write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

struct RunFlags {
  std::string config;
  std::optional<int> port;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  bool no_dashboard = false;
};

int cmd_run(const RunFlags& flags) {
  hpo::RunConfig cfg;
  try {
    cfg = hpo::load_run_config(flags.config);
  } catch (const hpo::ConfigError& e) {
    std::cerr << "hpo: config error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (const char* env_port = std::getenv("SHERPA_PORT"); env_port != nullptr && *env_port != '\0') {
    try {
      cfg.port = std::stoi(env_port);
    } catch (const std::exception&) {
      std::cerr << "hpo: config error: SHERPA_PORT is not a port number\n";
      return kExitConfig;
    }
  }
  if (flags.port) cfg.port = *flags.port;
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.output_dir) cfg.output_dir = *flags.output_dir;
  if (flags.no_dashboard) cfg.dashboard = false;

  hpo::Study study(hpo::StudyConfig{cfg.parameters, cfg.lower_is_better, cfg.seed},
                   hpo::make_algorithm(cfg.algorithm, cfg.parameters));
  hpo::LocalScheduler scheduler(hpo::LocalSchedulerOptions{cfg.trial_timeout, std::chrono::milliseconds(5000)});

  hpo::RunnerConfig rc;
  rc.command = cfg.command;
  rc.max_concurrent = cfg.max_concurrent;
  rc.resources = cfg.resources;
  rc.poll_interval = cfg.poll_interval;
  rc.server.port = cfg.port;
  rc.server.dashboard = cfg.dashboard;
  rc.server.static_dir = cfg.dashboard_dir;
  rc.on_listening = [&](int port) {
    if (cfg.dashboard) {
      std::cout << "dashboard: http://" << rc.server.host << ":" << port << "/" << std::endl;
    } else {
      std::cout << "server: " << rc.server.host << ":" << port << std::endl;
    }
  };

  hpo::RunReport report;
  try {
    hpo::Runner runner(study, scheduler, rc);
    report = runner.run();
  } catch (const hpo::PortInUse& e) {
    std::cerr << "hpo: " << e.what() << '\n';
    return kExitScheduler;
  } catch (const hpo::SchedulerError& e) {
    std::cerr << "hpo: scheduler failure: " << e.what() << '\n';
    return kExitScheduler;
  } catch (const std::invalid_argument& e) {
    std::cerr << "hpo: config error: " << e.what() << '\n';
    return kExitConfig;
  }

  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  hpo::Json best = {{"trial_id", nullptr}, {"parameters", nullptr}, {"objective", nullptr}};
  if (auto b = study.best_result()) {
    best = {{"trial_id", b->trial_id},
            {"parameters", hpo::parameters_to_json(b->parameters, study.trial(b->trial_id).directives)},
            {"objective", b->objective}};
  }
  if (!write_file(dir / "results.jsonl", hpo::to_jsonl(study.results())) ||
      !write_file(dir / "results.csv", hpo::to_csv(study.results())) ||
      !write_file(dir / "best.json", hpo::canonical_dump(best) + "\n")) {
    std::cerr << "hpo: cannot write results to " << dir << '\n';
    return 1;
  }
  std::cout << "trials: " << report.submitted << " submitted, " << report.completed << " completed, "
            << report.failed << " failed, " << report.stopped << " stopped, max concurrent "
            << report.max_concurrent_observed << "\n";
  return report.completed > 0 ? 0 : 1;
}

int cmd_bench(const hpo::BenchOptions& options, const std::string& output_dir) {
  std::vector<hpo::BenchSeries> series;
  try {
    series = hpo::run_bench(options);
  } catch (const std::invalid_argument& e) {
    std::cerr << "hpo: " << e.what() << '\n';
    return kExitConfig;
  }
  std::cout << hpo::bench_table(series);
  const fs::path dir(output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!write_file(dir / "bench_report.json", hpo::canonical_dump(hpo::bench_report(options, series)) + "\n")) {
    std::cerr << "hpo: cannot write " << (dir / "bench_report.json") << '\n';
    return 1;
  }
  return 0;
}

int cmd_export(const std::string& input, const std::string& format, std::string output) {
  if (format != "csv") {
    std::cerr << "hpo: unsupported export format '" << format << "'\n";
    return kExitConfig;
  }
  std::ifstream in(input);
  if (!in) {
    std::cerr << "hpo: cannot read " << input << '\n';
    return kExitConfig;
  }
  hpo::ResultsTable table;
  try {
    table = hpo::read_jsonl(in);
  } catch (const hpo::MalformedResults& e) {
    std::cerr << "hpo: malformed results: " << e.what() << '\n';
    return kExitConfig;
  }
  if (output.empty()) output = (fs::path(input).parent_path() / "results.csv").string();
  if (!write_file(output, hpo::to_csv(table))) {
    std::cerr << "hpo: cannot write " << output << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed hyperparameter optimization"};
  app.require_subcommand(1);

  RunFlags run;
  auto* run_cmd = app.add_subcommand("run", "Run a parallel optimization from a config file");
  run_cmd->add_option("--config,config", run.config, "Run configuration (JSON)")->required();
  run_cmd->add_option("--port", run.port, "Protocol server port (0 picks a free one)");
  run_cmd->add_option("--seed", run.seed, "Study seed");
  run_cmd->add_option("--output-dir", run.output_dir, "Directory for results files");
  run_cmd->add_flag("--no-dashboard", run.no_dashboard, "Do not serve the dashboard at /");

  hpo::BenchOptions bench;
  std::string bench_dir = ".";
  auto* bench_cmd = app.add_subcommand("bench", "Compare algorithms on synthetic objectives");
  bench_cmd->add_option("--suite", bench.suite, "sphere, branin or step-decay-curves");
  bench_cmd->add_option("--algorithm", bench.algorithms, "Algorithm to include (repeatable)");
  bench_cmd->add_option("--budget", bench.budget, "Trials per run");
  bench_cmd->add_option("--seeds", bench.seeds, "Number of paired seeds");
  bench_cmd->add_option("--seed", bench.base_seed, "First seed");
  bench_cmd->add_option("--dimension", bench.dimension, "Sphere dimension");
  bench_cmd->add_option("--output-dir", bench_dir, "Directory for bench_report.json");

  std::string input;
  std::string format = "csv";
  std::string output;
  auto* export_cmd = app.add_subcommand("export", "Convert results.jsonl to CSV");
  export_cmd->add_option("--input,input", input, "results.jsonl")->required();
  export_cmd->add_option("--format", format, "Output format (csv)");
  export_cmd->add_option("--output", output, "Output path (default: results.csv next to the input)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (*run_cmd) return cmd_run(run);
  if (*bench_cmd) return cmd_bench(bench, bench_dir);
  return cmd_export(input, format, output);
}
