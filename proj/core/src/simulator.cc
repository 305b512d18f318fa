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

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include <boost/math/distributions/students_t.hpp>

#include "haggle/error.h"

namespace haggle {
namespace {

using nlohmann::json;

std::string_view TaskKey(Task task) { return task == Task::kCraigslist ? "cb" : "dn"; }

Task ParseTaskKey(std::string_view key) {
  if (key == "cb") return Task::kCraigslist;
  if (key == "dn") return Task::kDealOrNoDeal;
  throw SchemaError("unknown task '" + std::string(key) + "'");
}

json ReadJson(const std::filesystem::path& path) {
  try {
    return json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string() + ": invalid JSON: " + e.what());
  }
}

// Turns a chosen act into an event, realizing messages through the
// generator. A pending partner offer can only be answered.
AgentTurn ToTurn(CoarseDialogueAct act, const DialogueState& state, Role self,
                 const EngineBundle& bundle, const Parser& parser, const GeneratorConfig& gen,
                 Rng& rng) {
  const auto& pending = state.pending_offer();
  const bool must_answer = pending && pending->role != self;
  if (must_answer && act.intent != Intent::kAccept && act.intent != Intent::kReject &&
      act.intent != Intent::kQuit) {
    act = CoarseDialogueAct::Of(Intent::kReject);
  }
  AgentTurn turn;
  turn.event.role = self;
  switch (act.intent) {
    case Intent::kOffer:
      turn.event.kind = EventKind::kOffer;
      turn.event.price = act.price;
      turn.event.split = act.split;
      break;
    case Intent::kAccept: turn.event.kind = EventKind::kAccept; break;
    case Intent::kReject: turn.event.kind = EventKind::kReject; break;
    case Intent::kQuit: turn.event.kind = EventKind::kQuit; break;
    default: {
      const Realization r = Realize(bundle.index, parser, act, state, self, gen, rng);
      turn.event.kind = EventKind::kMessage;
      turn.event.text = r.text;
      act = r.act;
      break;
    }
  }
  turn.intended = std::move(act);
  return turn;
}

class PolicyAgent : public Agent {
 public:
  PolicyAgent(std::shared_ptr<const EngineBundle> bundle, const PolicyParams* params,
              std::shared_ptr<const PolicyParams> owner, AgentKind kind, DecodeMode decode,
              GeneratorConfig gen)
      : bundle_(std::move(bundle)),
        params_(params),
        owner_(std::move(owner)),
        kind_(kind),
        decode_(decode),
        gen_(gen),
        parser_(bundle_->lexicon) {}

  std::string_view kind() const override { return AgentKindName(kind_); }

  AgentTurn Act(const DialogueState& state, Role self, Rng& rng) const override {
    const TokenContext context = ContextForNextAct(state, self);
    EmittedAct emitted = EmitAct(*params_, context, state.scenario(), rng, decode_);
    AgentTurn turn = ToTurn(emitted.act, state, self, *bundle_, parser_, gen_, rng);
    turn.steps = std::move(emitted.steps);
    return turn;
  }

 private:
  std::shared_ptr<const EngineBundle> bundle_;
  const PolicyParams* params_;
  std::shared_ptr<const PolicyParams> owner_;
  AgentKind kind_;
  DecodeMode decode_;
  GeneratorConfig gen_;
  Parser parser_;
};

class HybridAgent : public Agent {
 public:
  HybridAgent(std::shared_ptr<const EngineBundle> bundle, HybridConfig config, GeneratorConfig gen)
      : bundle_(std::move(bundle)), config_(config), gen_(gen), parser_(bundle_->lexicon) {}

  std::string_view kind() const override { return AgentKindName(AgentKind::kHybrid); }

  AgentTurn Act(const DialogueState& state, Role self, Rng& rng) const override {
    const CoarseDialogueAct act =
        state.task() == Task::kCraigslist
            ? HybridNextActCB(state, self, bundle_->intent_lm, config_, rng)
            : HybridNextActDN(state, self, config_);
    return ToTurn(act, state, self, *bundle_, parser_, gen_, rng);
  }

 private:
  std::shared_ptr<const EngineBundle> bundle_;
  HybridConfig config_;
  GeneratorConfig gen_;
  Parser parser_;
};

double MeanReward(const Agent& learner, const Agent& partner, std::span<const Scenario> scenarios,
                  const Parser& parser, const RlOptions& options, std::uint64_t seed) {
  double total = 0;
  for (int v = 0; v < options.validation_episodes; ++v) {
    const int slot = v % 2;
    const Scenario& scenario = scenarios[static_cast<std::size_t>(v) % scenarios.size()];
    const EpisodeConfig config{options.max_turns, MixSeed(seed, static_cast<std::uint64_t>(v))};
    const EpisodeResult r = slot == 0 ? RunEpisode(learner, partner, scenario, parser, config)
                                      : RunEpisode(partner, learner, scenario, parser, config);
    total += EpisodeReward(options.reward, r.outcome, r.state,
                           RoleForSlot(TaskOf(scenario), slot), options.reward_options);
  }
  return total / options.validation_episodes;
}

}  // namespace

void EngineBundle::Save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  WriteFile(dir / "bundle.json",
            json{{"format", "haggle-bundle"}, {"version", kFormatVersion}, {"task", TaskKey(task)}}
                    .dump(2) +
                "\n");
  WriteFile(dir / "lexicon.json", lexicon.ToJson().dump(2) + "\n");
  WriteFile(dir / "policy.json", policy.ToJson().dump() + "\n");
  WriteFile(dir / "index.json", index.ToJson().dump() + "\n");
  WriteFile(dir / "intent_lm.json", intent_lm.ToJson().dump(2) + "\n");
}

EngineBundle EngineBundle::Load(const std::filesystem::path& dir) {
  const json manifest = ReadJson(dir / "bundle.json");
  if (manifest.value("format", "") != "haggle-bundle" ||
      manifest.value("version", 0) != kFormatVersion) {
    throw SchemaError(dir.string() + ": not a version 1 engine bundle");
  }
  EngineBundle b;
  b.task = ParseTaskKey(manifest.at("task").get<std::string>());
  b.lexicon = PriceLexicon::FromJson(ReadJson(dir / "lexicon.json"));
  b.policy = PolicyParams::FromJson(ReadJson(dir / "policy.json"));
  b.index = RetrievalIndex::FromJson(ReadJson(dir / "index.json"));
  b.intent_lm = IntentLM::FromJson(ReadJson(dir / "intent_lm.json"));
  return b;
}

std::vector<Trajectory> CorpusTrajectories(std::span<const ParsedDialogue> parsed) {
  std::vector<Trajectory> out;
  for (const auto& d : parsed) {
    const Task task = TaskOf(d.scenario);
    for (int slot = 0; slot < 2; ++slot) {
      Trajectory t = DialogueSteps(d.scenario, d.events, d.acts, RoleForSlot(task, slot));
      if (!t.empty()) out.push_back(std::move(t));
    }
  }
  return out;
}

EngineBundle TrainSL(std::span<const DialogueRecord> corpus, const SlOptions& options) {
  if (corpus.empty()) throw HaggleError("cannot train on an empty corpus");
  EngineBundle b;
  b.task = TaskOf(corpus.front().scenario);
  for (const auto& r : corpus) {
    if (TaskOf(r.scenario) != b.task) throw HaggleError("corpus mixes tasks");
  }
  const auto utterances = Utterances(corpus);
  b.lexicon = BuildPriceLexicon(utterances);
  const Parser parser(b.lexicon);
  const auto parsed = ParseCorpus(corpus, parser);
  b.policy = MleFit(CorpusTrajectories(parsed), options.policy_smoothing);
  b.index = BuildIndex(parsed, b.lexicon, options.lm_smoothing);
  std::vector<std::vector<Intent>> intents;
  for (const auto& d : parsed) {
    auto& seq = intents.emplace_back();
    for (const auto& a : d.acts) seq.push_back(a.intent);
  }
  b.intent_lm = IntentLM::Fit(intents, options.intent_lm_smoothing);
  return b;
}

std::string_view AgentKindName(AgentKind kind) {
  switch (kind) {
    case AgentKind::kSlAct: return "sl_act";
    case AgentKind::kRlAct: return "rl_act";
    case AgentKind::kHybrid: return "hybrid";
  }
  return "?";
}

AgentKind ParseAgentKind(std::string_view name) {
  if (name == "sl_act" || name == "sl") return AgentKind::kSlAct;
  if (name == "rl_act" || name == "rl") return AgentKind::kRlAct;
  if (name == "hybrid") return AgentKind::kHybrid;
  throw HaggleError("unknown agent kind '" + std::string(name) + "'");
}

std::unique_ptr<Agent> MakeAgent(const AgentSpec& spec) {
  if (!spec.bundle) throw HaggleError("agent spec needs an engine bundle");
  if (spec.kind == AgentKind::kHybrid) {
    return std::make_unique<HybridAgent>(spec.bundle, spec.hybrid, spec.generator);
  }
  const PolicyParams* params = spec.policy ? spec.policy.get() : &spec.bundle->policy;
  return std::make_unique<PolicyAgent>(spec.bundle, params, spec.policy, spec.kind, spec.decode,
                                       spec.generator);
}

EpisodeResult RunEpisode(const Agent& slot0, const Agent& slot1, const Scenario& scenario,
                         const Parser& parser, const EpisodeConfig& config) {
  if (config.max_turns < 2) throw HaggleError("max_turns must be at least 2");
  EpisodeResult result{DialogueState(scenario), {}, {}};
  DialogueState& state = result.state;
  const Task task = TaskOf(scenario);
  const Rng root(config.seed);
  std::array<Rng, 2> rngs = {root.Fork(0), root.Fork(1)};
  const std::array<const Agent*, 2> agents = {&slot0, &slot1};
  for (int t = 0; t < config.max_turns && !state.terminal(); ++t) {
    const int slot = t % 2;
    const Role role = RoleForSlot(task, slot);
    AgentTurn turn = agents[slot]->Act(state, role, rngs[slot]);
    turn.event.turn = t;
    turn.event.role = role;
    const CoarseDialogueAct act =
        parser.Parse(turn.event, ParseContext::ForNextEvent(state, role));
    try {
      state.Append(turn.event, act);
    } catch (const HaggleError& e) {
      throw HaggleError(std::string(agents[slot]->kind()) + " agent produced an invalid move at turn " +
                        std::to_string(t) + ": " + e.what());
    }
    if (!turn.steps.empty()) result.trajectories[slot].push_back(std::move(turn.steps));
  }
  if (!state.terminal()) state.EndWithoutAgreement();
  result.outcome = ComputeOutcome(state);
  return result;
}

EvaluationResult Evaluate(const Agent& slot0, const Agent& slot1,
                          std::span<const Scenario> scenarios, const Parser& parser, int episodes,
                          std::uint64_t seed, int max_turns) {
  if (episodes < 1) throw HaggleError("evaluation needs at least one episode");
  if (scenarios.empty()) throw HaggleError("evaluation needs scenarios");
  EvaluationResult out;
  out.episodes.reserve(static_cast<std::size_t>(episodes));
  for (int i = 0; i < episodes; ++i) {
    const EpisodeConfig config{max_turns, MixSeed(seed, static_cast<std::uint64_t>(i))};
    out.episodes.push_back(
        RunEpisode(slot0, slot1, scenarios[static_cast<std::size_t>(i) % scenarios.size()], parser,
                   config)
            .state);
  }
  out.metrics = ComputeMetrics(out.episodes);
  return out;
}

json TrainingReport::ToJson() const {
  json validation_json = json::array();
  for (const auto& v : validation) {
    validation_json.push_back({{"episode", v.episode}, {"mean_reward", v.mean_reward}});
  }
  json out = {{"seed", seed},
              {"config", config},
              {"episodes", rewards.size()},
              {"validation", validation_json},
              {"best_episode", best_episode},
              {"best_validation_reward", best_validation_reward},
              {"diverged", diverged}};
  if (!warning.empty()) out["warning"] = warning;
  return out;
}

std::string TrainingReport::CurveCsv() const {
  std::ostringstream out;
  out.precision(9);
  out << "episode,reward\n";
  for (std::size_t i = 0; i < rewards.size(); ++i) out << i + 1 << ',' << rewards[i] << '\n';
  return out.str();
}

RlResult TrainRL(const EngineBundle& bundle, const PolicyParams& initial, const Agent& partner,
                 std::span<const Scenario> scenarios, const RlOptions& options) {
  if (scenarios.empty()) throw HaggleError("RL needs training scenarios");
  const TrainerConfig& trainer = options.trainer;
  if (!(trainer.learning_rate > 0)) throw HaggleError("learning rate must be positive");
  if (trainer.episodes < 0) throw HaggleError("episode count must be non-negative");
  if (options.validate_every < 1 || options.validation_episodes < 1) {
    throw HaggleError("validation cadence and size must be positive");
  }

  // Non-owning handle: the learner reads `params` as it is updated.
  const std::shared_ptr<const EngineBundle> shared(&bundle, [](const EngineBundle*) {});
  PolicyParams params = initial;
  const PolicyAgent learner(shared, &params, nullptr, AgentKind::kRlAct, DecodeMode::kSample,
                            options.generator);
  const Parser parser(bundle.lexicon);
  const std::uint64_t validation_seed = MixSeed(trainer.seed, 0x76616c6964ULL);

  RlResult result{initial, {}};
  TrainingReport& report = result.report;
  report.seed = trainer.seed;
  report.config = {{"reward", RewardKindName(options.reward)},
                   {"signed_fairness", options.reward_options.signed_fairness},
                   {"learning_rate", trainer.learning_rate},
                   {"episodes", trainer.episodes},
                   {"max_turns", options.max_turns},
                   {"validate_every", options.validate_every},
                   {"validation_episodes", options.validation_episodes},
                   {"top_k", options.generator.top_k}};

  const auto validate = [&](int episode) {
    const double v = MeanReward(learner, partner, scenarios, parser, options, validation_seed);
    report.validation.push_back({episode, v});
    if (episode == 0 || v > report.best_validation_reward) {
      report.best_validation_reward = v;
      report.best_episode = episode;
      result.params = params;
    }
  };
  validate(0);

  Baseline baseline;
  const Rng root(trainer.seed);
  for (int i = 1; i <= trainer.episodes; ++i) {
    Rng rng = root.Fork(static_cast<std::uint64_t>(i));
    const Scenario& scenario =
        scenarios[static_cast<std::size_t>(rng.UniformInt(static_cast<int>(scenarios.size())))];
    const int slot = rng.UniformInt(2);
    const EpisodeConfig config{options.max_turns, rng.Next()};
    const EpisodeResult r = slot == 0 ? RunEpisode(learner, partner, scenario, parser, config)
                                      : RunEpisode(partner, learner, scenario, parser, config);
    const double reward = EpisodeReward(options.reward, r.outcome, r.state,
                                        RoleForSlot(TaskOf(scenario), slot), options.reward_options);
    report.rewards.push_back(reward);
    try {
      ReinforceUpdate(params, r.trajectories[slot], reward, baseline, trainer);
    } catch (const HaggleError& e) {
      report.diverged = true;
      report.warning = std::string("stopped at episode ") + std::to_string(i) + ": " + e.what();
      break;
    }
    if (options.on_episode) options.on_episode(i, reward);
    if (i % options.validate_every == 0 || i == trainer.episodes) {
      if (!params.AllFinite()) {
        report.diverged = true;
        report.warning = "non-finite weights at episode " + std::to_string(i);
        break;
      }
      validate(i);
    }
  }
  return result;
}

PairedTest PairedTTest(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw HaggleError("paired samples differ in size");
  if (a.size() < 2) throw HaggleError("paired test needs at least two pairs");
  PairedTest out;
  out.n = static_cast<int>(a.size());
  double mean = 0;
  for (std::size_t i = 0; i < a.size(); ++i) mean += b[i] - a[i];
  mean /= out.n;
  double ss = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = b[i] - a[i] - mean;
    ss += d * d;
  }
  out.mean_difference = mean;
  const double se = std::sqrt(ss / (out.n - 1) / out.n);
  if (se == 0) {
    out.t = mean == 0 ? 0 : std::copysign(std::numeric_limits<double>::infinity(), mean);
    out.p_value = mean == 0 ? 1 : 0;
    return out;
  }
  out.t = mean / se;
  const boost::math::students_t dist(out.n - 1);
  out.p_value = 2 * boost::math::cdf(boost::math::complement(dist, std::abs(out.t)));
  return out;
}

}  // namespace haggle
