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

#include <cmath>
#include <functional>
#include <limits>
#include <set>

#include "hpo/algorithms_basic.hpp"
#include "hpo/study.hpp"

using namespace hpo;

namespace {

StudyConfig simple_config(bool lower_is_better = true, std::uint64_t seed = 1) {
  return {{ParameterDef::continuous("x", 0.0, 1.0)}, lower_is_better, seed};
}

Study random_study(std::optional<std::size_t> max = std::nullopt, bool lower_is_better = true) {
  return Study(simple_config(lower_is_better), std::make_unique<RandomSearch>(max));
}

StudyErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const StudyError& e) {
    return e.code();
  }
  FAIL("expected StudyError");
  return StudyErrorCode::AlgorithmFailure;
}

class Throwing final : public Algorithm {
 public:
  Proposal next(const SuggestContext&) override {
    if (calls_++ == 0) throw std::runtime_error("boom");
    return Proposal::ready(Assignment{{"x", 0.5}});
  }
  std::string name() const override { return "throwing"; }

 private:
  int calls_ = 0;
};

}  // namespace

TEST_CASE("suggestions get sequential ids and stop at max_num_trials") {
  auto study = random_study(50);
  for (TrialId i = 1; i <= 50; ++i) {
    auto t = study.get_suggestion();
    REQUIRE(t);
    CHECK(t->id == i);
    CHECK(t->status == TrialStatus::Issued);
  }
  CHECK_FALSE(study.get_suggestion());
}

TEST_CASE("iterating the study yields trials until done") {
  auto study = random_study(7);
  std::size_t n = 0;
  for (const Trial& t : study) {
    CHECK(t.id == static_cast<TrialId>(n + 1));
    ++n;
  }
  CHECK(n == 7);
}

TEST_CASE("grid over two choices gives six distinct trials") {
  StudyConfig cfg{{ParameterDef::choice("a", {std::string("x"), std::string("y"), std::string("z")}),
                   ParameterDef::choice("b", {true, false})},
                  true, 0};
  Study study(cfg, std::make_unique<GridSearch>());
  std::set<Assignment> seen;
  for (const Trial& t : study) seen.insert(t.parameters);
  CHECK(seen.size() == 6);
  CHECK(study.trials().size() == 6);
}

TEST_CASE("add_observation appends intermediate rows and rejects non-finite objectives") {
  auto study = random_study();
  const auto t = *study.get_suggestion();
  CHECK(study.add_observation(t.id, 0, 0.91, {{"loss", 0.31}}) == ObservationOutcome::Accepted);
  REQUIRE(study.results().size() == 1);
  CHECK(study.results().rows()[0].status == TrialStatus::Running);
  CHECK(study.results().rows()[0].context.at("loss") == 0.31);

  CHECK(study.add_observation(t.id, 1, std::numeric_limits<double>::quiet_NaN()) == ObservationOutcome::Rejected);
  CHECK(study.add_observation(t.id, 1, std::numeric_limits<double>::infinity()) == ObservationOutcome::Rejected);
  CHECK(study.results().size() == 1);

  CHECK(study.add_observation(t.id, 1, 0.5) == ObservationOutcome::Accepted);
  CHECK(study.add_observation(t.id, 2, 0.4) == ObservationOutcome::Accepted);
  CHECK(study.results().size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(study.results().rows()[i].iteration == static_cast<std::int64_t>(i));
}

TEST_CASE("non-monotonic iterations are stored and flagged") {
  auto study = random_study();
  const auto t = *study.get_suggestion();
  study.add_observation(t.id, 3, 1.0);
  CHECK(study.add_observation(t.id, 1, 2.0) == ObservationOutcome::AcceptedNonMonotonic);
  CHECK(study.nonmonotonic(t.id));
  CHECK(study.results().size() == 2);
  // Final objective follows the highest iteration, not arrival order.
  CHECK(study.finalize(t.id) == TrialStatus::Completed);
  CHECK(*study.final_objective(t.id) == 1.0);
}

TEST_CASE("finalize semantics") {
  auto study = random_study();
  const auto a = *study.get_suggestion();
  for (int i = 0; i < 15; ++i) study.add_observation(a.id, i, 1.0 / (i + 1));
  CHECK(study.finalize(a.id) == TrialStatus::Completed);
  CHECK(*study.final_objective(a.id) == 1.0 / 15);
  CHECK(study.results().rows().back().status == TrialStatus::Completed);
  CHECK(*study.results().rows().back().objective == 1.0 / 15);

  const auto b = *study.get_suggestion();
  CHECK(study.finalize(b.id) == TrialStatus::Failed);

  CHECK(code_of([&] { study.finalize(a.id); }) == StudyErrorCode::DoubleFinalize);
  CHECK(code_of([&] { study.add_observation(a.id, 20, 0.1); }) == StudyErrorCode::TrialAlreadyFinalized);
  CHECK(code_of([&] { study.add_observation(99, 0, 0.1); }) == StudyErrorCode::UnknownTrial);
  CHECK(code_of([&] { study.finalize(99); }) == StudyErrorCode::UnknownTrial);
}

TEST_CASE("stop keeps observations and is terminal") {
  auto study = random_study();
  const auto t = *study.get_suggestion();
  study.add_observation(t.id, 0, 0.2);
  study.stop(t.id);
  CHECK(study.trial(t.id).status == TrialStatus::Stopped);
  CHECK(study.observations(t.id).size() == 1);
  CHECK_FALSE(study.best_result());
  CHECK(code_of([&] { study.finalize(t.id); }) == StudyErrorCode::DoubleFinalize);
}

TEST_CASE("best_result examples") {
  SUBCASE("higher is better") {
    auto study = random_study(std::nullopt, false);
    const auto a = *study.get_suggestion();
    const auto b = *study.get_suggestion();
    study.add_observation(a.id, 0, 0.90);
    study.add_observation(b.id, 0, 0.94);
    study.finalize(a.id);
    study.finalize(b.id);
    CHECK(study.best_result()->trial_id == 2);
  }
  SUBCASE("ties go to the lowest id") {
    auto study = random_study();
    const auto a = *study.get_suggestion();
    const auto b = *study.get_suggestion();
    study.add_observation(b.id, 0, 0.5);
    study.finalize(b.id);
    study.add_observation(a.id, 0, 0.5);
    study.finalize(a.id);
    CHECK(study.best_result()->trial_id == 1);
  }
  SUBCASE("none completed") {
    auto study = random_study();
    const auto a = *study.get_suggestion();
    study.finalize(a.id);
    CHECK_FALSE(study.best_result());
  }
}

TEST_CASE("algorithm failure leaves the study usable") {
  Study study(simple_config(), std::make_unique<Throwing>());
  CHECK(code_of([&] { study.suggest(); }) == StudyErrorCode::AlgorithmFailure);
  auto t = study.get_suggestion();
  REQUIRE(t);
  CHECK(t->id == 1);
}

TEST_CASE("property: terminal rows equal finalized trials and replay reproduces the study") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Study study(simple_config(seed % 2 == 0, seed), std::make_unique<RandomSearch>(40));
    Rng rng(seed);
    std::uniform_int_distribution<int> action(0, 9);
    std::vector<TrialId> open;
    while (auto t = study.get_suggestion()) {
      open.push_back(t->id);
      // Interleave observations and terminal events across open trials.
      while (!open.empty() && action(rng) < 6) {
        const std::size_t k = static_cast<std::size_t>(action(rng)) % open.size();
        const TrialId id = open[k];
        const int a = action(rng);
        if (a < 5) {
          study.add_observation(id, a, std::sin(static_cast<double>(id * 7 + a)));
          continue;
        }
        if (a < 8) {
          study.finalize(id);
        } else {
          study.stop(id);
        }
        open.erase(open.begin() + static_cast<std::ptrdiff_t>(k));
        REQUIRE(study.results().terminal_count() == study.finalized_count());
      }
    }
    for (TrialId id : open) study.finalize(id);
    REQUIRE(study.results().terminal_count() == study.finalized_count());

    const Study replayed = Study::replay(study.config(), study.results());
    const auto b1 = study.best_result();
    const auto b2 = replayed.best_result();
    REQUIRE(b1.has_value() == b2.has_value());
    if (b1) {
      CHECK(b1->trial_id == b2->trial_id);
      CHECK(b1->objective == b2->objective);
      CHECK(study.trial(b1->trial_id).status == TrialStatus::Completed);
    }
    for (const auto& t : study.trials()) {
      if (!is_terminal(t.status)) continue;
      CHECK(replayed.trial(t.id).status == t.status);
    }
    CHECK(replayed.results().rows() == study.results().rows());
  }
}

TEST_CASE("property: fixed seed gives a bit-identical transcript") {
  auto run = [](std::uint64_t seed) {
    Study study(simple_config(true, seed), std::make_unique<RandomSearch>(25));
    for (const Trial& t : study) {
      study.add_observation(t.id, 0, std::get<double>(t.parameters.at("x")) * 3.0);
      study.finalize(t.id);
    }
    return study.results().rows();
  };
  CHECK(run(9) == run(9));
  CHECK_FALSE(run(9) == run(10));
}
