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

#ifndef HAGGLE_SIMULATOR_H_
#define HAGGLE_SIMULATOR_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "haggle/corpus.h"
#include "haggle/generator.h"
#include "haggle/hybrid.h"
#include "haggle/parser.h"
#include "haggle/policy.h"
#include "haggle/rewards.h"
#include "haggle/rng.h"
#include "haggle/types.h"

namespace haggle {

// Everything supervised training produces for one task.
struct EngineBundle {
  static constexpr int kFormatVersion = 1;

  Task task = Task::kCraigslist;
  PriceLexicon lexicon;
  PolicyParams policy;
  RetrievalIndex index;
  IntentLM intent_lm;

  // Writes bundle.json, lexicon.json, policy.json, index.json and
  // intent_lm.json into `dir`.
  void Save(const std::filesystem::path& dir) const;
  static EngineBundle Load(const std::filesystem::path& dir);
};

struct SlOptions {
  // Laplace smoothing of the act policy. Small but positive so that RL can
  // reach continuations the corpus never shows.
  double policy_smoothing = 0.01;
  double lm_smoothing = 0.1;
  double intent_lm_smoothing = IntentLM::kDefaultSmoothing;
};

// Lexicon from the corpus' "$" prices, parse, MLE act policy, retrieval
// index and intent LM. Throws on an empty or mixed-task corpus.
EngineBundle TrainSL(std::span<const DialogueRecord> corpus, const SlOptions& options = {});

// Act trajectories of both slots in a parsed corpus, for MLE fitting.
std::vector<Trajectory> CorpusTrajectories(std::span<const ParsedDialogue> parsed);

// One move chosen by an agent. The runner fills in the turn index.
struct AgentTurn {
  DialogueEvent event;
  CoarseDialogueAct intended;
  // Act-token steps when the move came from the learnable policy.
  Trajectory steps;
};

class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string_view kind() const = 0;
  // Must return an event that DialogueState::Append accepts.
  virtual AgentTurn Act(const DialogueState& state, Role self, Rng& rng) const = 0;
};

enum class AgentKind { kSlAct, kRlAct, kHybrid };

std::string_view AgentKindName(AgentKind kind);
AgentKind ParseAgentKind(std::string_view name);

struct AgentSpec {
  AgentKind kind = AgentKind::kHybrid;
  std::shared_ptr<const EngineBundle> bundle;
  // Act policy for kSlAct / kRlAct; defaults to bundle->policy.
  std::shared_ptr<const PolicyParams> policy;
  DecodeMode decode = DecodeMode::kSample;
  HybridConfig hybrid;
  GeneratorConfig generator;
};

// Throws if the spec lacks a bundle.
std::unique_ptr<Agent> MakeAgent(const AgentSpec& spec);

struct EpisodeConfig {
  int max_turns = 20;
  std::uint64_t seed = 0;
};

struct EpisodeResult {
  DialogueState state;
  Outcome outcome;
  // Policy steps of each slot, one trajectory per act.
  std::array<std::vector<Trajectory>, 2> trajectories;
};

// Alternating turns from slot 0. Messages are parsed by `parser` to fill
// the act history. Ends on accept, reject, quit or max_turns events.
EpisodeResult RunEpisode(const Agent& slot0, const Agent& slot1, const Scenario& scenario,
                         const Parser& parser, const EpisodeConfig& config);

struct EvaluationResult {
  std::vector<DialogueState> episodes;
  EpisodeMetrics metrics;
};

// Episode i plays scenarios[i % size] with per-episode seeds forked from
// `seed`, so two evaluations with the same arguments are paired.
EvaluationResult Evaluate(const Agent& slot0, const Agent& slot1,
                          std::span<const Scenario> scenarios, const Parser& parser, int episodes,
                          std::uint64_t seed, int max_turns = 20);

struct RlOptions {
  RewardKind reward = RewardKind::kUtility;
  RewardOptions reward_options;
  TrainerConfig trainer;
  int max_turns = 20;
  int validate_every = 250;
  int validation_episodes = 100;
  GeneratorConfig generator;
  // Called after each episode with (episode, reward); may be empty.
  std::function<void(int, double)> on_episode;
};

struct ValidationPoint {
  int episode;
  double mean_reward;
};

struct TrainingReport {
  std::uint64_t seed = 0;
  nlohmann::json config;
  std::vector<double> rewards;
  std::vector<ValidationPoint> validation;
  int best_episode = 0;
  double best_validation_reward = 0;
  bool diverged = false;
  std::string warning;

  nlohmann::json ToJson() const;
  // "episode,reward" rows.
  std::string CurveCsv() const;
};

struct RlResult {
  PolicyParams params;
  TrainingReport report;
};

// REINFORCE against a fixed partner. The learner's role is drawn per
// episode; its slot's trajectories are the actions. Returns the checkpoint
// with the best mean validation reward (the initial parameters count as
// the checkpoint at episode 0).
RlResult TrainRL(const EngineBundle& bundle, const PolicyParams& initial, const Agent& partner,
                 std::span<const Scenario> scenarios, const RlOptions& options);

struct PairedTest {
  int n = 0;
  double mean_difference = 0;
  double t = 0;
  // Two-sided.
  double p_value = 1;
};

// Paired t-test on b - a.
PairedTest PairedTTest(std::span<const double> a, std::span<const double> b);

}  // namespace haggle

#endif  // HAGGLE_SIMULATOR_H_
