// Copyright 2026 The Haggle Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "haggle/simulator.h"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "haggle/error.h"
#include "test_support.h"

namespace haggle {
namespace {

class SimulatorTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const auto corpus = SynthCorpus(Task::kCraigslist, 80, 5);
    bundle_ = std::make_shared<const EngineBundle>(TrainSL(corpus));
    scenarios_ = new std::vector<Scenario>();
    for (const auto& p : SynthPostings(17, 10)) {
      for (const auto& s : GenerateScenarios(p)) scenarios_->push_back(s);
    }
  }
  static void TearDownTestSuite() {
    bundle_.reset();
    delete scenarios_;
  }

  static std::unique_ptr<Agent> Make(AgentKind kind) {
    AgentSpec spec;
    spec.kind = kind;
    spec.bundle = bundle_;
    if (kind == AgentKind::kRlAct) spec.policy = std::make_shared<const PolicyParams>(bundle_->policy);
    return MakeAgent(spec);
  }

  static Parser MakeParser() { return Parser(bundle_->lexicon); }

  static std::shared_ptr<const EngineBundle> bundle_;
  static std::vector<Scenario>* scenarios_;
};

std::shared_ptr<const EngineBundle> SimulatorTest::bundle_;
std::vector<Scenario>* SimulatorTest::scenarios_ = nullptr;

constexpr std::array kKinds = {AgentKind::kSlAct, AgentKind::kRlAct, AgentKind::kHybrid};

TEST_F(SimulatorTest, EpisodesAreDeterministicPerSeed) {
  const Parser parser = MakeParser();
  for (const auto a : kKinds) {
    for (const auto b : kKinds) {
      const auto x = Make(a);
      const auto y = Make(b);
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const EpisodeConfig config{.max_turns = 20, .seed = seed};
        const auto& s = (*scenarios_)[seed];
        const EpisodeResult r1 = RunEpisode(*x, *y, s, parser, config);
        const EpisodeResult r2 = RunEpisode(*x, *y, s, parser, config);
        ASSERT_EQ(r1.state.events(), r2.state.events()) << AgentKindName(a) << " " << AgentKindName(b);
        ASSERT_EQ(r1.state.acts(), r2.state.acts());
      }
    }
  }
}

TEST_F(SimulatorTest, EpisodesEndWithinMaxTurns) {
  const Parser parser = MakeParser();
  for (const auto a : kKinds) {
    const auto x = Make(a);
    const auto y = Make(AgentKind::kSlAct);
    for (const int max_turns : {2, 3, 20}) {
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const EpisodeResult r =
            RunEpisode(*x, *y, (*scenarios_)[seed % scenarios_->size()], parser, {max_turns, seed});
        ASSERT_TRUE(r.state.terminal());
        ASSERT_LE(r.state.num_events(), max_turns);
        EXPECT_EQ(r.outcome.num_turns, r.state.num_events());
      }
    }
  }
}

TEST_F(SimulatorTest, TooShortEpisodesAreRejected) {
  const auto a = Make(AgentKind::kHybrid);
  EXPECT_THROW(RunEpisode(*a, *a, scenarios_->front(), MakeParser(), {1, 0}), HaggleError);
}

TEST_F(SimulatorTest, HybridPairsAlwaysAgreeOnOverlappingRanges) {
  const Parser parser = MakeParser();
  const auto a = Make(AgentKind::kHybrid);
  const auto b = Make(AgentKind::kHybrid);
  const EvaluationResult r = Evaluate(*a, *b, *scenarios_, parser, 60, 3);
  EXPECT_EQ(r.metrics.agreement_rate, 1.0);
}

TEST_F(SimulatorTest, AgreedPriceIsTheOfferedPrice) {
  const Parser parser = MakeParser();
  const auto a = Make(AgentKind::kSlAct);
  const auto b = Make(AgentKind::kHybrid);
  const EvaluationResult r = Evaluate(*a, *b, *scenarios_, parser, 100, 9);
  int agreed = 0;
  for (const auto& d : r.episodes) {
    const Outcome o = ComputeOutcome(d);
    if (!o.agreement) continue;
    ++agreed;
    const auto& events = d.events();
    ASSERT_GE(events.size(), 2u);
    ASSERT_EQ(events.back().kind, EventKind::kAccept);
    const auto& offer = events[events.size() - 2];
    ASSERT_EQ(offer.kind, EventKind::kOffer);
    EXPECT_EQ(o.final_price, offer.price);
  }
  EXPECT_GT(agreed, 0);
}

TEST_F(SimulatorTest, EvaluateRejectsEmptyInputs) {
  const Parser parser = MakeParser();
  const auto a = Make(AgentKind::kHybrid);
  EXPECT_THROW(Evaluate(*a, *a, *scenarios_, parser, 0, 1), HaggleError);
  EXPECT_THROW(Evaluate(*a, *a, std::span<const Scenario>(), parser, 5, 1), HaggleError);
}

TEST_F(SimulatorTest, ReinforceMovesLearnerButNotPartner) {
  const PolicyParams before = bundle_->policy;
  const auto partner = Make(AgentKind::kSlAct);
  RlOptions options;
  options.trainer.learning_rate = 0.05;
  options.trainer.episodes = 60;
  options.trainer.seed = 2;
  options.validate_every = 30;
  options.validation_episodes = 10;
  const RlResult r1 = TrainRL(*bundle_, bundle_->policy, *partner, *scenarios_, options);
  EXPECT_EQ(bundle_->policy, before);
  EXPECT_EQ(r1.report.rewards.size(), 60u);
  EXPECT_EQ(r1.report.validation.size(), 3u);
  EXPECT_FALSE(r1.report.diverged);
  const RlResult r2 = TrainRL(*bundle_, bundle_->policy, *partner, *scenarios_, options);
  EXPECT_EQ(r1.report.rewards, r2.report.rewards);
  EXPECT_EQ(r1.params, r2.params);
  EXPECT_EQ(r1.report.CurveCsv().substr(0, 15), "episode,reward\n");
}

TEST_F(SimulatorTest, BundleSaveLoadRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "haggle_bundle_test";
  std::filesystem::remove_all(dir);
  bundle_->Save(dir);
  const EngineBundle back = EngineBundle::Load(dir);
  EXPECT_EQ(back.task, bundle_->task);
  EXPECT_EQ(back.policy, bundle_->policy);
  EXPECT_EQ(back.intent_lm, bundle_->intent_lm);
  EXPECT_EQ(back.index.candidates(), bundle_->index.candidates());
  EXPECT_EQ(back.lexicon.left_neighbors, bundle_->lexicon.left_neighbors);
  std::filesystem::remove(dir / "bundle.json");
  EXPECT_THROW(EngineBundle::Load(dir), HaggleError);
  std::filesystem::remove_all(dir);
}

TEST_F(SimulatorTest, AgentKindNames) {
  for (const auto k : kKinds) EXPECT_EQ(ParseAgentKind(AgentKindName(k)), k);
  EXPECT_EQ(ParseAgentKind("rl"), AgentKind::kRlAct);
  EXPECT_THROW(ParseAgentKind("oracle"), HaggleError);
  AgentSpec spec;
  spec.kind = AgentKind::kRlAct;
  EXPECT_THROW(MakeAgent(spec), HaggleError);
  // Without its own parameters an RL agent plays the supervised policy.
  spec.bundle = bundle_;
  const auto rl = MakeAgent(spec);
  const auto sl = Make(AgentKind::kSlAct);
  const auto partner = Make(AgentKind::kHybrid);
  const Parser parser = MakeParser();
  EXPECT_EQ(RunEpisode(*rl, *partner, scenarios_->front(), parser, {20, 4}).state.events(),
            RunEpisode(*sl, *partner, scenarios_->front(), parser, {20, 4}).state.events());
}

TEST(DnSimulationTest, HybridAgentsFinishDealOrNoDeal) {
  const auto corpus = SynthCorpus(Task::kDealOrNoDeal, 40, 6);
  const auto bundle = std::make_shared<const EngineBundle>(TrainSL(corpus));
  const Parser parser(bundle->lexicon);
  AgentSpec spec;
  spec.bundle = bundle;
  const auto a = MakeAgent(spec);
  Rng rng(3);
  std::vector<Scenario> scenarios;
  for (int i = 0; i < 20; ++i) scenarios.push_back(SynthDnScenario(rng));
  const EvaluationResult r = Evaluate(*a, *a, scenarios, parser, 40, 1);
  EXPECT_GT(r.metrics.agreement_rate, 0.5);
  for (const auto& d : r.episodes) {
    const Outcome o = ComputeOutcome(d);
    if (!o.agreement) continue;
    EXPECT_TRUE(o.final_split->IsComplete(std::get<DNScenario>(d.scenario()).counts));
  }
}

TEST(PairedTTestTest, MatchesReferenceValues) {
  const std::vector<double> a = {1, 2, 3, 4, 5};
  const std::vector<double> b = {2, 4, 6, 8, 10};
  const PairedTest t = PairedTTest(a, b);
  EXPECT_EQ(t.n, 5);
  EXPECT_NEAR(t.mean_difference, 3.0, 1e-12);
  EXPECT_NEAR(t.t, 4.242640687119285, 1e-9);
  EXPECT_NEAR(t.p_value, 0.013235599563682695, 1e-9);

  const std::vector<double> c = {0.1, 0.4, -0.2, 0.5, 0.3, 0.0, 0.2, -0.1};
  const std::vector<double> d = {0.3, 0.2, 0.1, 0.9, 0.4, 0.4, 0.1, 0.3};
  const PairedTest u = PairedTTest(c, d);
  EXPECT_NEAR(u.t, 2.250401893367499, 1e-9);
  EXPECT_NEAR(u.p_value, 0.059163033835308895, 1e-9);
  EXPECT_NEAR(PairedTTest(d, c).t, -u.t, 1e-12);
}

TEST(PairedTTestTest, DegenerateInputs) {
  const std::vector<double> a = {1, 2, 3};
  const std::vector<double> same = {1, 2, 3};
  const std::vector<double> shifted = {2, 3, 4};
  EXPECT_EQ(PairedTTest(a, same).p_value, 1.0);
  EXPECT_EQ(PairedTTest(a, shifted).p_value, 0.0);
  EXPECT_TRUE(std::isinf(PairedTTest(a, shifted).t));
  const std::vector<double> short_b = {1};
  EXPECT_THROW(PairedTTest(a, short_b), HaggleError);
}

}  // namespace
}  // namespace haggle
