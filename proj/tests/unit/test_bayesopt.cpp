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


#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hpo/algorithms_basic.hpp"
#include "hpo/bayesopt.hpp"
#include "hpo/synthetic.hpp"

using namespace hpo;

namespace {

const std::vector<ParameterDef> kLine{ParameterDef::continuous("x", 0.0, 1.0)};

double best_distance(std::unique_ptr<Algorithm> algo, std::uint64_t seed, std::size_t budget) {
  Study study({kLine, true, seed}, std::move(algo));
  synthetic::run_api(
      study,
      [](Study& s, const Trial& t) {
        const double x = std::get<double>(t.parameters.at("x"));
        s.add_observation(t.id, 0, (x - 0.3) * (x - 0.3));
      },
      budget);
  return std::sqrt(study.best_result()->objective);
}

}  // namespace

TEST_CASE("initial design is random and sized from the encoded width") {
  BayesianOptimization probe;
  CHECK(probe.num_initial(kLine) == 3);
  const std::vector wide{ParameterDef::continuous("a", 0, 1),
                         ParameterDef::choice("c", {std::string("x"), std::string("y"), std::string("z")})};
  CHECK(probe.num_initial(wide) == 8);

  auto algo = std::make_unique<BayesianOptimization>(BayesOptOptions{.max_num_trials = 6});
  const auto* bo = algo.get();
  Study study({kLine, true, 3}, std::move(algo));
  std::vector<BayesOptSource> sources;
  for (const Trial& t : study) {
    sources.push_back(bo->last_source());
    study.add_observation(t.id, 0, std::get<double>(t.parameters.at("x")));
    study.finalize(t.id);
  }
  REQUIRE(sources.size() == 6);
  for (int i = 0; i < 3; ++i) CHECK(sources[static_cast<std::size_t>(i)] == BayesOptSource::Initial);
  CHECK(sources[3] == BayesOptSource::Acquisition);
  // f(x) = x is minimized on the boundary; once that is pinned EI can vanish
  // everywhere and the draw falls back to random.
  for (int i = 4; i < 6; ++i) CHECK(sources[static_cast<std::size_t>(i)] != BayesOptSource::Initial);
}

TEST_CASE("identical observations fall back to random draws") {
  auto algo = std::make_unique<BayesianOptimization>(BayesOptOptions{.max_num_trials = 6});
  const auto* bo = algo.get();
  Study study({kLine, true, 3}, std::move(algo));
  std::vector<BayesOptSource> sources;
  for (const Trial& t : study) {
    sources.push_back(bo->last_source());
    study.add_observation(t.id, 0, 1.0);
    study.finalize(t.id);
  }
  for (std::size_t i = 3; i < sources.size(); ++i) CHECK(sources[i] == BayesOptSource::FlatFallback);
}

TEST_CASE("pending trials are ignored by the model") {
  auto algo = std::make_unique<BayesianOptimization>(BayesOptOptions{.max_num_trials = 10});
  const auto* bo = algo.get();
  Study study({kLine, true, 1}, std::move(algo));
  for (int i = 0; i < 5; ++i) {
    auto t = study.get_suggestion();
    REQUIRE(t);
    CHECK(bo->last_source() == BayesOptSource::Initial);
  }
}

TEST_CASE("bayesian optimization finds the minimum of a parabola") {
  std::vector<double> bo;
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    BayesOptOptions opt;
    opt.max_num_trials = 30;
    const double b = best_distance(std::make_unique<BayesianOptimization>(opt), seed, 30);
    const double r = best_distance(std::make_unique<RandomSearch>(30), seed, 30);
    bo.push_back(b);
    if (b < r) ++wins;
  }
  std::nth_element(bo.begin(), bo.begin() + 10, bo.end());
  CHECK(bo[10] < 0.05);
  CHECK(wins >= 16);
}

TEST_CASE("property: a larger budget never worsens the best result") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t budget : {5u, 8u, 12u}) {
      BayesOptOptions opt;
      opt.max_num_trials = budget;
      const double d = best_distance(std::make_unique<BayesianOptimization>(opt), seed, budget);
      CHECK(d <= previous);
      previous = d;
    }
  }
}
