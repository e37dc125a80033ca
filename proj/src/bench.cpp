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


#include "hpo/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>

#include "hpo/algorithms_basic.hpp"
#include "hpo/asha.hpp"
#include "hpo/bayesopt.hpp"
#include "hpo/study.hpp"
#include "hpo/synthetic.hpp"

namespace hpo {

namespace {

std::vector<ParameterDef> suite_space(const BenchOptions& o) {
  if (o.suite == "sphere") return synthetic::sphere_space(o.dimension);
  if (o.suite == "branin") return synthetic::branin_space();
  if (o.suite == "step-decay-curves") return synthetic::StepDecayCurves::space();
  throw UnknownSuite("unknown suite '" + o.suite + "' (expected sphere, branin or step-decay-curves)");
}

std::unique_ptr<Algorithm> bench_algorithm(const std::string& name, const BenchOptions& o,
                                           std::span<const ParameterDef> defs) {
  if (name == "random_search") return std::make_unique<RandomSearch>(o.budget);
  if (name == "bayesian_optimization") {
    BayesOptOptions b;
    b.max_num_trials = o.budget;
    return std::make_unique<BayesianOptimization>(b);
  }
  if (name == "local_search") {
    LocalSearchOptions l;
    for (const auto& def : defs) l.seed[def.name()] = clamp_numeric(def, 0.5 * (def.lo() + def.hi()));
    l.max_num_trials = o.budget;
    return std::make_unique<LocalSearch>(std::move(l));
  }
  if (name == "asha") {
    if (o.suite != "step-decay-curves") throw std::invalid_argument("asha needs the step-decay-curves suite");
    AshaOptions a;
    a.min_budget = 1;
    a.max_budget = synthetic::StepDecayCurves::kFullBudget;
    a.eta = 3;
    a.max_num_trials = o.budget;
    return std::make_unique<Asha>(a);
  }
  throw std::invalid_argument("algorithm '" + name + "' is not available in bench");
}

}  // namespace

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<BenchSeries> run_bench(const BenchOptions& options) {
  const auto defs = suite_space(options);
  std::vector<std::string> names = options.algorithms;
  if (names.empty()) {
    names = options.suite == "step-decay-curves" ? std::vector<std::string>{"random_search", "asha"}
                                                 : std::vector<std::string>{"random_search", "bayesian_optimization"};
  }

  std::vector<BenchSeries> out;
  for (const auto& name : names) {
    BenchSeries series{name, {}, {}};
    if (options.budget == 0) {
      out.push_back(std::move(series));
      continue;
    }
    for (std::size_t s = 0; s < options.seeds; ++s) {
      const std::uint64_t seed = options.base_seed + s;
      Study study(StudyConfig{defs, true, seed}, bench_algorithm(name, options, defs));
      std::int64_t iterations = 0;
      if (options.suite == "step-decay-curves") {
        synthetic::run_api(study, synthetic::step_decay_evaluator(seed, iterations));
        // The answer is the best trial among those trained to the largest
        // budget any trial reached.
        std::int64_t top = 0;
        for (const auto& t : study.trials()) top = std::max(top, t.directives.budget.value_or(synthetic::StepDecayCurves::kFullBudget));
        double best = std::numeric_limits<double>::infinity();
        for (const auto& t : study.trials()) {
          const auto fo = study.final_objective(t.id);
          if (t.status == TrialStatus::Completed && fo &&
              t.directives.budget.value_or(synthetic::StepDecayCurves::kFullBudget) == top) {
            best = std::min(best, synthetic::StepDecayCurves::final_loss(t.parameters));
          }
        }
        series.best.push_back(best);
        series.iterations.push_back(iterations);
      } else {
        const bool is_sphere = options.suite == "sphere";
        synthetic::run_api(study, [&](Study& st, const Trial& t) {
          std::vector<double> x;
          for (const auto& def : defs) x.push_back(numeric_value(t.parameters.at(def.name())));
          st.add_observation(t.id, 0, is_sphere ? synthetic::sphere(x) : synthetic::branin(x[0], x[1]));
        });
        const auto best = study.best_result();
        series.best.push_back(best ? best->objective : std::numeric_limits<double>::infinity());
      }
    }
    out.push_back(std::move(series));
  }
  return out;
}

Json bench_report(const BenchOptions& options, const std::vector<BenchSeries>& series) {
  Json doc = Json::object();
  doc["suite"] = options.suite;
  doc["budget"] = options.budget;
  doc["seeds"] = options.seeds;
  doc["base_seed"] = options.base_seed;
  Json algos = Json::object();
  for (const auto& s : series) {
    Json a = Json::object();
    a["best"] = s.best;
    if (!s.best.empty()) {
      a["median"] = quantile(s.best, 0.5);
      a["q1"] = quantile(s.best, 0.25);
      a["q3"] = quantile(s.best, 0.75);
    }
    if (!s.iterations.empty()) a["iterations"] = s.iterations;
    algos[s.algorithm] = std::move(a);
  }
  doc["algorithms"] = std::move(algos);
  return doc;
}

std::string bench_table(const std::vector<BenchSeries>& series) {
  std::string out = "algorithm                 median        IQR\n";
  char line[160];
  for (const auto& s : series) {
    if (s.best.empty()) {
      std::snprintf(line, sizeof line, "%-24s  %-12s  %s\n", s.algorithm.c_str(), "-", "-");
    } else {
      std::snprintf(line, sizeof line, "%-24s  %-12.6g  %.6g\n", s.algorithm.c_str(), quantile(s.best, 0.5),
                    quantile(s.best, 0.75) - quantile(s.best, 0.25));
    }
    out += line;
  }
  return out;
}

}  // namespace hpo
