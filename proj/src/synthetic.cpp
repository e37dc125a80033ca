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


#include "hpo/synthetic.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>

namespace hpo::synthetic {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t bits(double v) {
  std::uint64_t b = 0;
  std::memcpy(&b, &v, sizeof b);
  return b;
}

// Standard normal from a hash, via Box-Muller.
double hashed_normal(std::uint64_t h) {
  const double u1 = (static_cast<double>(splitmix(h) >> 11) + 0.5) / 9007199254740992.0;
  const double u2 = (static_cast<double>(splitmix(h ^ 0x5bd1e995ULL) >> 11) + 0.5) / 9007199254740992.0;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

std::vector<ParameterDef> sphere_space(std::size_t d) {
  std::vector<ParameterDef> defs;
  for (std::size_t i = 0; i < d; ++i) defs.push_back(ParameterDef::continuous("x" + std::to_string(i), -5.0, 5.0));
  return defs;
}

double branin(double x1, double x2) {
  constexpr double pi = std::numbers::pi;
  const double b = 5.1 / (4.0 * pi * pi);
  const double c = 5.0 / pi;
  const double t = 1.0 / (8.0 * pi);
  const double u = x2 - b * x1 * x1 + c * x1 - 6.0;
  return u * u + 10.0 * (1.0 - t) * std::cos(x1) + 10.0;
}

std::vector<ParameterDef> branin_space() {
  return {ParameterDef::continuous("x1", -5.0, 10.0), ParameterDef::continuous("x2", 0.0, 15.0)};
}

std::vector<ParameterDef> StepDecayCurves::space() {
  return {ParameterDef::continuous("x", 0.0, 1.0), ParameterDef::continuous("y", 0.0, 1.0)};
}

double StepDecayCurves::quality(const Assignment& a) {
  const double x = numeric_value(a.at("x"));
  const double y = numeric_value(a.at("y"));
  return (x - 0.3) * (x - 0.3) + (y - 0.6) * (y - 0.6);
}

double StepDecayCurves::loss(const Assignment& a, std::int64_t t, std::uint64_t seed) {
  std::uint64_t h = splitmix(seed);
  h = splitmix(h ^ bits(numeric_value(a.at("x"))));
  h = splitmix(h ^ bits(numeric_value(a.at("y"))));
  h = splitmix(h ^ static_cast<std::uint64_t>(t));
  return quality(a) + 0.5 * std::exp(-static_cast<double>(t) / 8.0) + 1e-3 * hashed_normal(h);
}

double StepDecayCurves::final_loss(const Assignment& a) {
  return quality(a) + 0.5 * std::exp(-static_cast<double>(kFullBudget) / 8.0);
}

std::vector<ParameterDef> Recurrence::space() { return {ParameterDef::continuous("lr", 0.0, 1.0)}; }

double Recurrence::train(const Trial& trial) {
  double score = 0.0;
  if (trial.directives.load_from) {
    auto it = checkpoints_.find(*trial.directives.load_from);
    if (it == checkpoints_.end()) throw std::runtime_error("missing checkpoint " + *trial.directives.load_from);
    score = it->second;
  }
  const double lr = numeric_value(trial.parameters.at("lr"));
  score += lr * static_cast<double>(trial.directives.budget.value_or(1));
  checkpoints_[trial.directives.save_to.value_or(std::to_string(trial.id))] = score;
  return score;
}

std::size_t run_api(Study& study, const std::function<void(Study&, const Trial&)>& evaluate,
                    std::optional<std::size_t> max_trials) {
  std::size_t n = 0;
  while (!max_trials || n < *max_trials) {
    SuggestResult next = study.suggest();
    if (next.kind == SuggestKind::Done) break;
    if (next.kind == SuggestKind::Wait) {
      throw std::logic_error("algorithm waits although every trial is finalized");
    }
    study.mark_running(next.trial.id);
    evaluate(study, next.trial);
    study.finalize(next.trial.id);
    ++n;
  }
  return n;
}

std::function<void(Study&, const Trial&)> step_decay_evaluator(std::uint64_t seed, std::int64_t& iterations) {
  return [seed, &iterations](Study& study, const Trial& trial) {
    const std::int64_t budget = trial.directives.budget.value_or(StepDecayCurves::kFullBudget);
    std::int64_t start = 1;
    if (trial.directives.load_from) {
      const Trial& parent = study.trial(std::stoll(*trial.directives.load_from));
      start = parent.directives.budget.value_or(0) + 1;
    }
    for (std::int64_t t = start; t <= budget; ++t) {
      study.add_observation(trial.id, t, StepDecayCurves::loss(trial.parameters, t, seed));
      ++iterations;
    }
  };
}

}  // namespace hpo::synthetic
