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

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hpo/param_space.hpp"
#include "hpo/study.hpp"

namespace hpo::synthetic {

/// Sum of squares over x in [-5, 5]^d; minimum 0 at the origin.
double sphere(std::span<const double> x);
std::vector<ParameterDef> sphere_space(std::size_t d = 2);

/// Branin-Hoo on [-5, 10] x [0, 15]; global minimum 0.397887.
double branin(double x1, double x2);
std::vector<ParameterDef> branin_space();
inline constexpr double kBraninMinimum = 0.39788735772973816;

/// Learning-curve surrogate: loss(t) = quality + 0.5 * exp(-t / 8) + noise,
/// with quality = (x - 0.3)^2 + (y - 0.6)^2. All configurations share the
/// same decay, so ranks at small t predict ranks at the full budget.
struct StepDecayCurves {
  static constexpr std::int64_t kFullBudget = 27;
  static std::vector<ParameterDef> space();
  static double quality(const Assignment& a);
  /// Deterministic in (seed, assignment, t).
  static double loss(const Assignment& a, std::int64_t t, std::uint64_t seed);
  /// Noise-free loss at the full budget.
  static double final_loss(const Assignment& a);
};

/// Checkpointed toy training: each generation adds lr to a score that is
/// carried through save_to / load_from identifiers. Higher is better.
class Recurrence {
 public:
  static std::vector<ParameterDef> space();  // lr in [0, 1]

  /// Trains one trial for its budget, resuming from load_from, and returns
  /// the score after training.
  double train(const Trial& trial);

 private:
  std::map<std::string, double> checkpoints_;
};

/// Runs a study in API mode until the algorithm is done. `evaluate` reports
/// observations for one trial; the driver finalizes it. Returns the number
/// of trials run.
std::size_t run_api(Study& study, const std::function<void(Study&, const Trial&)>& evaluate,
                    std::optional<std::size_t> max_trials = std::nullopt);

/// Evaluator for the step-decay suite. Counts iterations consumed in
/// `iterations`; a trial resuming from a checkpoint only pays the extra
/// iterations.
std::function<void(Study&, const Trial&)> step_decay_evaluator(std::uint64_t seed, std::int64_t& iterations);

}  // namespace hpo::synthetic
