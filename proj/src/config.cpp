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


#include "hpo/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "hpo/algorithms_basic.hpp"
#include "hpo/asha.hpp"
#include "hpo/bayesopt.hpp"
#include "hpo/pbt.hpp"

namespace hpo {

ConfigError::ConfigError(std::string field, const std::string& detail, std::size_t line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + detail
                                  : (field.empty() ? detail : field + ": " + detail)),
      field_(std::move(field)),
      line_(line) {}

namespace {

// Accessor that knows its own path for error messages.
class Node {
 public:
  Node(const Json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const Json& json() const { return j_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& detail) const { throw ConfigError(path_, detail); }

  void only_keys(const std::set<std::string>& allowed) const {
    if (!j_.is_object()) fail("must be an object");
    for (const auto& [k, v] : j_.items()) {
      if (!allowed.count(k)) Node(v, child_path(k)).fail("unknown key");
    }
  }

  bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }
  Node at(const std::string& key) const {
    if (!has(key)) Node(j_, child_path(key)).fail("is required");
    return Node(j_.at(key), child_path(key));
  }
  Node at(std::size_t i) const { return Node(j_.at(i), path_ + "[" + std::to_string(i) + "]"); }

  std::string str() const {
    if (!j_.is_string()) fail("must be a string");
    return j_.get<std::string>();
  }
  bool boolean() const {
    if (!j_.is_boolean()) fail("must be true or false");
    return j_.get<bool>();
  }
  double number() const {
    if (!j_.is_number()) fail("must be a number");
    return j_.get<double>();
  }
  std::int64_t integer(std::int64_t min) const {
    if (!j_.is_number_integer()) fail("must be an integer");
    const auto v = j_.get<std::int64_t>();
    if (v < min) fail("must be at least " + std::to_string(min));
    return v;
  }
  std::size_t count(std::int64_t min = 0) const { return static_cast<std::size_t>(integer(min)); }
  std::vector<double> numbers() const {
    if (!j_.is_array() || j_.empty()) fail("must be a non-empty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j_.size(); ++i) out.push_back(at(i).number());
    return out;
  }

 private:
  std::string child_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const Json& j_;
  std::string path_;
};

std::optional<std::size_t> max_trials(const Node& opts) {
  if (!opts.has("max_num_trials")) return std::nullopt;
  return opts.at("max_num_trials").count(0);
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) line += text[i] == '\n';
  return line;
}

}  // namespace

std::unique_ptr<Algorithm> make_algorithm(const AlgorithmSpec& spec, std::span<const ParameterDef> defs,
                                          const std::string& field) {
  const Node opts(spec.options, field + ".options");
  if (!spec.options.is_object()) opts.fail("must be an object");
  const std::string& name = spec.name;

  if (name == "random_search") {
    opts.only_keys({"max_num_trials"});
    return std::make_unique<RandomSearch>(max_trials(opts));
  }
  if (name == "grid_search") {
    opts.only_keys({"num_grid_points", "per_parameter", "max_grid_size"});
    GridSearchOptions o;
    if (opts.has("num_grid_points")) o.num_grid_points = opts.at("num_grid_points").count(2);
    if (opts.has("max_grid_size")) o.max_grid_size = opts.at("max_grid_size").count(1);
    if (opts.has("per_parameter")) {
      const Node per = opts.at("per_parameter");
      if (!per.json().is_object()) per.fail("must be an object");
      for (const auto& [k, v] : per.json().items()) o.per_parameter[k] = Node(v, per.path() + "." + k).count(2);
    }
    try {
      GridSearch::grid_size(defs, o);
    } catch (const AlgorithmError& e) {
      opts.fail(e.what());
    }
    return std::make_unique<GridSearch>(std::move(o));
  }
  if (name == "bayesian_optimization") {
    opts.only_keys({"max_num_trials", "num_initial", "num_candidates", "num_refined", "restarts"});
    BayesOptOptions o;
    o.max_num_trials = max_trials(opts);
    if (opts.has("num_initial")) o.num_initial = opts.at("num_initial").count(1);
    if (opts.has("num_candidates")) o.num_candidates = opts.at("num_candidates").count(1);
    if (opts.has("num_refined")) o.num_refined = opts.at("num_refined").count(0);
    if (opts.has("restarts")) o.gp.restarts = opts.at("restarts").count(1);
    return std::make_unique<BayesianOptimization>(std::move(o));
  }
  if (name == "asha") {
    opts.only_keys({"min_budget", "max_budget", "eta", "min_rung", "max_num_trials"});
    AshaOptions o;
    if (opts.has("min_budget")) o.min_budget = opts.at("min_budget").integer(1);
    if (opts.has("max_budget")) o.max_budget = opts.at("max_budget").integer(1);
    if (opts.has("eta")) o.eta = opts.at("eta").integer(2);
    if (opts.has("min_rung")) o.min_rung = opts.at("min_rung").integer(0);
    o.max_num_trials = max_trials(opts);
    try {
      return std::make_unique<Asha>(o);
    } catch (const AlgorithmError& e) {
      opts.fail(e.what());
    }
  }
  if (name == "population_based_training") {
    opts.only_keys({"population_size", "num_generations", "generation_length", "truncation",
                    "perturbation_factors", "resample_probability"});
    PbtOptions o;
    if (opts.has("population_size")) o.population_size = opts.at("population_size").count(2);
    if (opts.has("num_generations")) o.num_generations = opts.at("num_generations").count(1);
    if (opts.has("generation_length")) o.generation_length = opts.at("generation_length").integer(1);
    if (opts.has("truncation")) o.truncation = opts.at("truncation").number();
    if (opts.has("perturbation_factors")) o.perturbation_factors = opts.at("perturbation_factors").numbers();
    if (opts.has("resample_probability")) o.resample_probability = opts.at("resample_probability").number();
    try {
      return std::make_unique<PopulationBasedTraining>(std::move(o));
    } catch (const AlgorithmError& e) {
      opts.fail(e.what());
    }
  }
  if (name == "local_search") {
    opts.only_keys({"seed", "perturbation_factors", "max_num_trials"});
    LocalSearchOptions o;
    const Node seed = opts.at("seed");
    if (!seed.json().is_object()) seed.fail("must be an object of parameter values");
    for (const auto& def : defs) {
      if (!seed.json().contains(def.name())) Node(seed.json(), seed.path() + "." + def.name()).fail("is required");
      try {
        o.seed[def.name()] = value_from_json(seed.json().at(def.name()), def);
      } catch (const std::exception& e) {
        Node(seed.json(), seed.path() + "." + def.name()).fail(e.what());
      }
    }
    if (seed.json().size() != defs.size()) seed.fail("has values for unknown parameters");
    if (opts.has("perturbation_factors")) o.perturbation_factors = opts.at("perturbation_factors").numbers();
    o.max_num_trials = max_trials(opts);
    try {
      return std::make_unique<LocalSearch>(std::move(o));
    } catch (const AlgorithmError& e) {
      opts.fail(e.what());
    }
  }
  if (name == "repeat") {
    opts.only_keys({"algorithm", "k"});
    const Node inner = opts.at("algorithm");
    inner.only_keys({"name", "options"});
    AlgorithmSpec inner_spec{inner.at("name").str(), inner.has("options") ? inner.at("options").json() : Json::object()};
    auto wrapped = make_algorithm(inner_spec, defs, inner.path());
    return std::make_unique<Repeat>(std::move(wrapped), opts.at("k").count(1));
  }
  throw ConfigError(field + ".name", "unknown algorithm '" + name + "'");
}

RunConfig parse_run_config(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what(), line_of(text, e.byte == 0 ? 0 : e.byte - 1));
  }
  const Node root(doc, "");
  root.only_keys({"parameters", "algorithm", "lower_is_better", "command", "max_concurrent", "resources", "seed",
                  "output_dir", "dashboard", "port", "poll_interval_ms", "trial_timeout_s", "dashboard_dir"});

  RunConfig cfg;
  const Node params = root.at("parameters");
  if (!params.json().is_array() || params.json().empty()) params.fail("must be a non-empty array");
  for (std::size_t i = 0; i < params.json().size(); ++i) {
    const Node p = params.at(i);
    try {
      cfg.parameters.push_back(parameter_def_from_json(p.json()));
    } catch (const std::invalid_argument& e) {
      p.fail(e.what());
    }
    if (is_reserved_name(cfg.parameters.back().name())) {
      p.at("name").fail("names starting with 'sherpa_' are reserved");
    }
  }
  try {
    validate_space(cfg.parameters);
  } catch (const SpaceError& e) {
    std::size_t index = 0;
    // A duplicate is reported at its second occurrence.
    int skip = e.code() == SpaceErrorCode::DuplicateName ? 1 : 0;
    for (; index < cfg.parameters.size(); ++index) {
      if (cfg.parameters[index].name() == e.parameter() && skip-- == 0) break;
    }
    std::string sub;
    switch (e.code()) {
      case SpaceErrorCode::BadRange:
        sub = cfg.parameters[index].is_categorical() ? "" : ".range";
        break;
      case SpaceErrorCode::EmptyCategories:
        sub = ".choices";
        break;
      case SpaceErrorCode::DuplicateName:
        sub = ".name";
        break;
      default:
        break;
    }
    throw ConfigError("parameters[" + std::to_string(index) + "]" + sub, e.what());
  }

  const Node algo = root.at("algorithm");
  algo.only_keys({"name", "options"});
  cfg.algorithm.name = algo.at("name").str();
  if (algo.has("options")) cfg.algorithm.options = algo.at("options").json();
  make_algorithm(cfg.algorithm, cfg.parameters);  // validates the options

  if (root.has("lower_is_better")) cfg.lower_is_better = root.at("lower_is_better").boolean();
  cfg.command = root.at("command").str();
  if (cfg.command.empty()) root.at("command").fail("must not be empty");
  if (root.has("max_concurrent")) cfg.max_concurrent = root.at("max_concurrent").count(1);
  if (root.has("resources")) {
    const Node res = root.at("resources");
    if (!res.json().is_array()) res.fail("must be an array");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < res.json().size(); ++i) {
      const Node r = res.at(i);
      std::string token;
      if (r.json().is_string()) {
        token = r.json().get<std::string>();
      } else if (r.json().is_number_integer()) {
        token = std::to_string(r.json().get<std::int64_t>());
      } else {
        r.fail("must be a string or an integer");
      }
      if (!seen.insert(token).second) r.fail("duplicate resource token '" + token + "'");
      cfg.resources.push_back(token);
    }
    if (!cfg.resources.empty() && cfg.max_concurrent > cfg.resources.size()) {
      root.at("max_concurrent").fail("exceeds the number of resources");
    }
  }
  if (root.has("seed")) cfg.seed = static_cast<std::uint64_t>(root.at("seed").integer(0));
  if (root.has("output_dir")) cfg.output_dir = root.at("output_dir").str();
  if (root.has("dashboard")) cfg.dashboard = root.at("dashboard").boolean();
  if (root.has("port")) {
    cfg.port = static_cast<int>(root.at("port").integer(0));
    if (cfg.port > 65535) root.at("port").fail("must be at most 65535");
  }
  if (root.has("poll_interval_ms")) {
    cfg.poll_interval = std::chrono::milliseconds(root.at("poll_interval_ms").integer(1));
  }
  if (root.has("trial_timeout_s")) {
    const double s = root.at("trial_timeout_s").number();
    if (!(s > 0)) root.at("trial_timeout_s").fail("must be positive");
    cfg.trial_timeout = std::chrono::milliseconds(static_cast<std::int64_t>(s * 1000.0));
  }
  if (root.has("dashboard_dir")) cfg.dashboard_dir = root.at("dashboard_dir").str();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

}  // namespace hpo
