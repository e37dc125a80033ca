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
#include <set>

#include "hpo/asha.hpp"
#include "hpo/pbt.hpp"
#include "hpo/synthetic.hpp"

using namespace hpo;

namespace {

const std::vector<ParameterDef> kUnit{ParameterDef::continuous("x", 0.0, 1.0)};

}  // namespace

TEST_CASE("asha rung ladder") {
  Asha a({1, 9, 3, 0, {}});
  REQUIRE(a.num_rungs() == 3);
  CHECK(a.rung_budget(0) == 1);
  CHECK(a.rung_budget(1) == 3);
  CHECK(a.rung_budget(2) == 9);

  Asha offset({1, 27, 3, 1, {}});
  REQUIRE(offset.num_rungs() == 3);
  CHECK(offset.rung_budget(0) == 3);

  Asha b({2, 100, 4, 0, {}});
  CHECK(b.num_rungs() == 3);  // 2, 8, 32
}

TEST_CASE("asha record is idempotent and checks the ladder") {
  Asha a({1, 9, 3, 0, {}});
  a.record(1, 1, 0.5, {{"x", 0.1}});
  a.record(1, 1, 0.2, {{"x", 0.1}});
  CHECK(a.rungs()[0].size() == 1);
  CHECK(a.rungs()[0][0].objective == 0.5);
  CHECK_NOTHROW(a.record(2, 9, 0.3, {{"x", 0.2}}));
  CHECK(a.rungs()[2].size() == 1);
  CHECK_THROWS_AS(a.record(3, 4, 0.3, {{"x", 0.2}}), UnknownRung);
}

TEST_CASE("asha promotes the rung leaders in objective order") {
  auto algo = std::make_unique<Asha>(AshaOptions{1, 9, 3, 0, 9});
  Study study({kUnit, true, 0}, std::move(algo));
  std::vector<Trial> fresh;
  for (int i = 0; i < 9; ++i) fresh.push_back(study.get_suggestion().value());
  // Objectives 1..9 in an order unrelated to the trial ids.
  const std::vector<double> objective{5, 2, 9, 1, 7, 3, 8, 4, 6};
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(*fresh[i].directives.budget == 1);
    CHECK(*fresh[i].directives.save_to == std::to_string(fresh[i].id));
    CHECK_FALSE(fresh[i].directives.load_from);
    study.add_observation(fresh[i].id, 1, objective[i]);
    study.finalize(fresh[i].id);
  }
  const std::vector<TrialId> expected_parents{4, 2, 6};
  for (TrialId parent : expected_parents) {
    auto t = study.get_suggestion();
    REQUIRE(t);
    CHECK(*t->directives.load_from == std::to_string(parent));
    CHECK(*t->directives.budget == 3);
    CHECK(*t->directives.save_to == std::to_string(t->id));
    CHECK(t->parameters == fresh[static_cast<std::size_t>(parent - 1)].parameters);
  }
  // Nothing left to promote, no fresh budget, three trials pending.
  CHECK(study.suggest().kind == SuggestKind::Wait);
}

TEST_CASE("asha floor rule issues a fresh config") {
  Study study({kUnit, true, 0}, std::make_unique<Asha>(AshaOptions{1, 9, 3, 0, {}}));
  const auto t = *study.get_suggestion();
  study.add_observation(t.id, 1, 0.4);
  study.finalize(t.id);
  const auto u = *study.get_suggestion();
  CHECK_FALSE(u.directives.load_from);
  CHECK(*u.directives.budget == 1);
}

TEST_CASE("asha exhausts once every trial is terminal") {
  Study study({kUnit, true, 0}, std::make_unique<Asha>(AshaOptions{1, 9, 3, 0, 2}));
  const auto a = *study.get_suggestion();
  const auto b = *study.get_suggestion();
  CHECK(study.suggest().kind == SuggestKind::Wait);
  study.finalize(a.id);
  study.finalize(b.id);
  CHECK(study.suggest().kind == SuggestKind::Done);
}

TEST_CASE("pbt cutoff and explore") {
  PbtOptions opt;
  opt.population_size = 4;
  opt.truncation = 0.25;
  CHECK(PopulationBasedTraining(opt).cutoff() == 1);
  opt.population_size = 8;
  CHECK(PopulationBasedTraining(opt).cutoff() == 2);
  opt.truncation = 0.2;
  CHECK(PopulationBasedTraining(opt).cutoff() == 2);

  const std::vector lr{ParameterDef::continuous_log("lr", 1e-4, 1e-1)};
  PbtOptions down;
  down.perturbation_factors = {0.8};
  Rng rng(0);
  const auto out = PopulationBasedTraining::explore({{"lr", 2e-3}}, lr, down, rng);
  CHECK(std::get<double>(out.at("lr")) == doctest::Approx(1.6e-3).epsilon(1e-12));

  const std::vector cat{ParameterDef::choice("c", {std::string("a"), std::string("b")})};
  PbtOptions never;
  never.resample_probability = 0.0;
  for (int i = 0; i < 20; ++i) {
    CHECK(PopulationBasedTraining::explore({{"c", Category(std::string("a"))}}, cat, never, rng) ==
          Assignment{{"c", Category(std::string("a"))}});
  }
}

TEST_CASE("pbt generation one: one exploit, three continue") {
  PbtOptions opt;
  opt.population_size = 4;
  opt.truncation = 0.25;
  opt.num_generations = 2;
  auto algo = std::make_unique<PopulationBasedTraining>(opt);
  const auto* pbt = algo.get();
  Study study({kUnit, false, 2}, std::move(algo));

  std::vector<Trial> gen0;
  for (int i = 0; i < 4; ++i) gen0.push_back(*study.get_suggestion());
  for (const auto& t : gen0) {
    CHECK_FALSE(t.directives.load_from);
    CHECK(*t.directives.save_to == std::to_string(t.id));
  }
  CHECK(study.suggest().kind == SuggestKind::Wait);
  const std::vector<double> score{0.4, 0.9, 0.1, 0.6};
  for (std::size_t i = 0; i < 4; ++i) {
    study.add_observation(gen0[i].id, 0, score[i]);
    study.finalize(gen0[i].id);
  }
  std::vector<Trial> gen1;
  for (int i = 0; i < 4; ++i) gen1.push_back(*study.get_suggestion());
  CHECK(study.suggest().kind == SuggestKind::Done);

  const auto& members = pbt->generations()[1];
  std::size_t exploited = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (members[i].exploited) {
      ++exploited;
      // The worst member (trial 3) copies the best one (trial 2).
      CHECK(gen0[i].id == 3);
      CHECK(*gen1[i].directives.load_from == "2");
    } else {
      CHECK(*gen1[i].directives.load_from == std::to_string(gen0[i].id));
      CHECK(gen1[i].parameters == gen0[i].parameters);
    }
    CHECK(*gen1[i].directives.save_to == std::to_string(gen1[i].id));
  }
  CHECK(exploited == 1);
}

TEST_CASE("property: pbt lineage is a forest over terminal parents") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    PbtOptions opt;
    opt.population_size = 6;
    opt.truncation = 0.25;
    opt.num_generations = 5;
    auto algo = std::make_unique<PopulationBasedTraining>(opt);
    const auto* pbt = algo.get();
    Study study({synthetic::Recurrence::space(), false, seed}, std::move(algo));
    synthetic::Recurrence task;
    std::set<TrialId> terminal;
    while (true) {
      const auto r = study.suggest();
      if (r.kind == SuggestKind::Done) break;
      REQUIRE(r.kind == SuggestKind::Trial);
      const Trial& t = r.trial;
      if (t.directives.load_from) CHECK(terminal.count(std::stoll(*t.directives.load_from)) == 1);
      study.add_observation(t.id, 0, task.train(t));
      study.finalize(t.id);
      terminal.insert(t.id);
    }
    const auto& lineage = pbt->lineage();
    CHECK(lineage.size() == 30);
    for (const auto& [id, node] : lineage) {
      if (node.generation == 0) {
        CHECK_FALSE(node.parent);
        continue;
      }
      REQUIRE(node.parent);
      CHECK(lineage.at(*node.parent).generation + 1 == node.generation);
    }
    const auto& gens = pbt->generations();
    for (std::size_t g = 1; g < gens.size(); ++g) {
      const auto& top = pbt->top_sets()[g - 1];
      for (const auto& m : gens[g]) {
        if (m.exploited) {
          CHECK(std::find(top.begin(), top.end(), *m.parent) != top.end());
        } else {
          CHECK(m.parameters == study.trial(*m.parent).parameters);
        }
      }
    }
  }
}
