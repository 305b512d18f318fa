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

// haggle: command-line front end for the negotiation engine.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "haggle/config.h"
#include "haggle/corpus.h"
#include "haggle/error.h"
#include "haggle/json_io.h"
#include "haggle/service.h"
#include "haggle/simulator.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace haggle {
namespace {

struct Common {
  std::optional<std::uint64_t> seed;
  std::string config_path;

  RunConfig Resolve() const {
    RunConfig config = config_path.empty() ? RunConfig{} : RunConfig::Load(config_path);
    if (seed) config.SetSeed(*seed);
    return config;
  }
};

void AddCommon(CLI::App* cmd, Common& common) {
  cmd->add_option("--seed", common.seed, "Seed for every random stream");
  cmd->add_option("--config", common.config_path, "JSON run configuration")
      ->check(CLI::ExistingFile);
}

std::shared_ptr<const EngineBundle> LoadBundle(const std::string& dir) {
  return std::make_shared<const EngineBundle>(EngineBundle::Load(dir));
}

std::shared_ptr<const PolicyParams> LoadPolicy(const std::string& path) {
  if (path.empty()) return nullptr;
  return std::make_shared<const PolicyParams>(PolicyParams::FromJson(json::parse(ReadFile(path))));
}

// Scenarios from a corpus file, or a seeded synthetic set for the task.
std::vector<Scenario> LoadScenarios(const std::string& corpus_path, Task task, std::uint64_t seed) {
  std::vector<Scenario> out;
  if (!corpus_path.empty()) {
    for (const auto& r : LoadCorpus(corpus_path, CorpusFormat::kCanonical)) {
      if (TaskOf(r.scenario) == task) out.push_back(r.scenario);
    }
    if (out.empty()) throw HaggleError(corpus_path + " has no scenarios for the bundle's task");
    return out;
  }
  if (task == Task::kCraigslist) {
    for (const auto& posting : SynthPostings(seed, 100)) {
      for (const auto& s : GenerateScenarios(posting)) out.push_back(s);
    }
  } else {
    Rng rng(seed);
    for (int i = 0; i < 300; ++i) out.push_back(SynthDnScenario(rng));
  }
  return out;
}

std::unique_ptr<Agent> BuildAgent(const std::string& kind_name,
                                  const std::shared_ptr<const EngineBundle>& bundle,
                                  const std::shared_ptr<const PolicyParams>& rl_policy,
                                  const RunConfig& config, bool greedy) {
  AgentSpec spec;
  spec.kind = ParseAgentKind(kind_name);
  spec.bundle = bundle;
  if (spec.kind == AgentKind::kRlAct) {
    if (!rl_policy) throw HaggleError("agent rl_act needs --rl-policy");
    spec.policy = rl_policy;
  }
  spec.decode = greedy ? DecodeMode::kGreedy : DecodeMode::kSample;
  spec.hybrid = config.hybrid;
  spec.generator = config.generator;
  return MakeAgent(spec);
}

void PrintJson(const json& j) { std::cout << j.dump(2) << '\n'; }

int RunIngest(const std::string& input, const std::string& format, const std::string& synthetic,
              int count, const std::string& output, const std::string& parsed_out,
              const Common& common) {
  const RunConfig config = common.Resolve();
  std::vector<DialogueRecord> records;
  LoadReport report;
  if (!synthetic.empty()) {
    const Task task = synthetic == "dn" ? Task::kDealOrNoDeal : Task::kCraigslist;
    records = SynthCorpus(task, count, config.episode.seed);
    report.records_read = report.records_loaded = static_cast<int>(records.size());
  } else {
    if (input.empty()) throw HaggleError("ingest needs --input or --synthetic");
    records = LoadCorpus(input, ParseCorpusFormat(format), &report);
  }
  SaveCorpus(output, records);
  if (!parsed_out.empty()) {
    const Parser parser(BuildPriceLexicon(Utterances(records)));
    WriteFile(parsed_out, ExportParsed(records, parser));
  }
  PrintJson({{"records_read", report.records_read},
             {"records_loaded", report.records_loaded},
             {"records_skipped", report.records_skipped},
             {"messages", report.messages},
             {"output", output}});
  return 0;
}

int RunStats(const std::string& corpus, const std::string& format, const Common& common) {
  common.Resolve();
  const auto records = LoadCorpus(corpus, ParseCorpusFormat(format));
  PrintJson(ComputeCorpusStats(records).ToJson());
  return 0;
}

int RunTrainSl(const std::string& corpus, const std::string& out, double policy_smoothing,
               const Common& common) {
  const RunConfig config = common.Resolve();
  const auto records = LoadCorpus(corpus, CorpusFormat::kCanonical);
  SlOptions options;
  options.policy_smoothing = policy_smoothing;
  options.lm_smoothing = config.generator.smoothing;
  const EngineBundle bundle = TrainSL(records, options);
  bundle.Save(out);
  std::vector<ParsedDialogue> parsed = ParseCorpus(records, Parser(bundle.lexicon));
  PrintJson({{"dialogues", records.size()},
             {"policy_features", bundle.policy.rows().size()},
             {"retrieval_candidates", bundle.index.candidates().size()},
             {"train_nll", MeanNegativeLogLikelihood(bundle.policy, CorpusTrajectories(parsed))},
             {"bundle", out}});
  return 0;
}

int RunTrainRl(const std::string& bundle_dir, const std::string& reward, const std::string& partner,
               const std::string& corpus, const std::string& out, std::optional<double> lr,
               std::optional<int> episodes, bool signed_fairness, const Common& common) {
  RunConfig config = common.Resolve();
  if (lr) config.trainer.learning_rate = *lr;
  if (episodes) config.trainer.episodes = *episodes;
  config.Validate();
  const auto bundle = LoadBundle(bundle_dir);
  const auto partner_agent = BuildAgent(partner, bundle, nullptr, config, false);
  const auto scenarios = LoadScenarios(corpus, bundle->task, config.trainer.seed);
  RlOptions options;
  options.reward = ParseRewardKind(reward);
  options.reward_options.signed_fairness = signed_fairness;
  options.trainer = config.trainer;
  options.max_turns = config.episode.max_turns;
  options.generator = config.generator;
  options.on_episode = [](int episode, double) {
    if (episode % 500 == 0) std::cerr << "episode " << episode << '\n';
  };
  const RlResult result = TrainRL(*bundle, bundle->policy, *partner_agent, scenarios, options);
  fs::create_directories(out);
  WriteFile(fs::path(out) / "policy.json", result.params.ToJson().dump() + "\n");
  json report = result.report.ToJson();
  report["partner"] = partner;
  WriteFile(fs::path(out) / "report.json", report.dump(2) + "\n");
  WriteFile(fs::path(out) / "curve.csv", result.report.CurveCsv());
  PrintJson(report);
  if (result.report.diverged) std::cerr << "warning: " << result.report.warning << '\n';
  return 0;
}

int RunSelfplay(const std::string& bundle_dir, const std::string& agent_a,
                const std::string& agent_b, const std::string& rl_policy, int n,
                const std::string& corpus, const std::string& out, bool greedy,
                const Common& common) {
  const RunConfig config = common.Resolve();
  const auto bundle = LoadBundle(bundle_dir);
  const auto policy = LoadPolicy(rl_policy);
  const auto a = BuildAgent(agent_a, bundle, policy, config, greedy);
  const auto b = BuildAgent(agent_b, bundle, policy, config, greedy);
  const auto scenarios = LoadScenarios(corpus, bundle->task, config.episode.seed);
  const Parser parser(bundle->lexicon);
  const EvaluationResult result =
      Evaluate(*a, *b, scenarios, parser, n, config.episode.seed, config.episode.max_turns);
  if (!out.empty()) {
    std::vector<DialogueRecord> records;
    for (std::size_t i = 0; i < result.episodes.size(); ++i) {
      const DialogueState& s = result.episodes[i];
      records.push_back({"selfplay-" + std::to_string(i), s.scenario(), s.events(),
                         ComputeOutcome(s)});
    }
    SaveCorpus(out, records);
  }
  PrintJson(result.metrics.ToJson());
  return 0;
}

int RunEval(const std::string& bundle_dir, const std::string& agent, const std::string& partner,
            const std::string& rl_policy, int n, const std::string& corpus, bool csv,
            const Common& common) {
  const RunConfig config = common.Resolve();
  const auto bundle = LoadBundle(bundle_dir);
  const auto policy = LoadPolicy(rl_policy);
  const auto a = BuildAgent(agent, bundle, policy, config, false);
  const auto b = BuildAgent(partner, bundle, policy, config, false);
  const auto scenarios = LoadScenarios(corpus, bundle->task, config.episode.seed);
  const Parser parser(bundle->lexicon);
  // Half the episodes with the agent in each slot.
  std::vector<DialogueState> episodes;
  std::vector<double> rewards;
  for (int i = 0; i < n; ++i) {
    const int slot = i % 2;
    const EpisodeConfig ec{config.episode.max_turns,
                           MixSeed(config.episode.seed, static_cast<std::uint64_t>(i))};
    const Scenario& s = scenarios[static_cast<std::size_t>(i) % scenarios.size()];
    EpisodeResult r = slot == 0 ? RunEpisode(*a, *b, s, parser, ec) : RunEpisode(*b, *a, s, parser, ec);
    rewards.push_back(r.outcome.agreement ? r.outcome.utilities[slot] : kNoAgreementReward);
    episodes.push_back(std::move(r.state));
  }
  const EpisodeMetrics metrics = ComputeMetrics(episodes);
  double mean_reward = 0;
  for (double r : rewards) mean_reward += r;
  mean_reward /= n;
  if (csv) {
    std::cout << MetricsCsvHeader() << '\n' << MetricsCsvRow(agent + "-vs-" + partner, metrics) << '\n';
    return 0;
  }
  json out = metrics.ToJson();
  out["agent"] = agent;
  out["partner"] = partner;
  out["agent_mean_utility_reward"] = mean_reward;
  PrintJson(out);
  return 0;
}

void PrintEvents(const json& events) {
  for (const auto& e : events) {
    std::cout << e["role"].get<std::string>() << " [" << e["kind"].get<std::string>() << "]";
    if (e.contains("text")) std::cout << ' ' << e["text"].get<std::string>();
    if (e.contains("price")) std::cout << " $" << e["price"].dump();
    if (e.contains("split")) std::cout << ' ' << e["split"].dump();
    std::cout << '\n';
  }
}

int RunChat(const std::string& bundle_dir, const std::string& bot, const std::string& role,
            const std::string& rl_policy, const Common& common) {
  const RunConfig config = common.Resolve();
  ServiceOptions options;
  options.bundle = LoadBundle(bundle_dir);
  options.rl_policy = LoadPolicy(rl_policy);
  options.seed = config.episode.seed;
  options.max_turns = config.episode.max_turns;
  options.hybrid = config.hybrid;
  options.generator = config.generator;
  SessionService service(options);
  json create = {{"bot_kind", bot}};
  if (!role.empty()) create["human_role"] = role;
  Response r = service.CreateSession(create);
  if (r.status != 201) throw HaggleError(r.body.value("error", "cannot create session"));
  const std::string id = r.body["session_id"];
  std::cout << "scenario: " << r.body["scenario"].dump() << '\n'
            << "you are " << r.body["human_role"].get<std::string>()
            << ". Type a message, or /offer <price | books hats balls>, /accept, /reject, /quit.\n";
  PrintEvents(r.body["bot_events"]);
  const bool dn = options.bundle->task == Task::kDealOrNoDeal;
  const Role human = ParseRole(r.body["human_role"].get<std::string>());
  std::string line;
  while (r.body["status"] == "active" && std::cout << "> " << std::flush &&
         std::getline(std::cin, line)) {
    if (line.empty()) continue;
    json event;
    if (line.rfind("/offer", 0) == 0) {
      std::istringstream in(line.substr(6));
      event["kind"] = "offer";
      if (dn) {
        ItemCounts share{};
        in >> share[0] >> share[1] >> share[2];
        const auto& scenario = std::get<DNScenario>(service.Export(id).scenario);
        event["split"] = SplitToJson(Split::FromShare(Slot(human), share, scenario.counts));
      } else {
        double price = 0;
        in >> price;
        event["price"] = price;
      }
    } else if (line == "/accept" || line == "/reject" || line == "/quit") {
      event["kind"] = line.substr(1);
    } else {
      event = {{"kind", "message"}, {"text", line}};
    }
    r = service.PostEvent(id, event);
    if (r.status != 200) {
      std::cout << "error: " << r.body["error"].get<std::string>() << '\n';
      r = service.GetSession(id);
      continue;
    }
    PrintEvents(r.body["bot_events"]);
  }
  if (r.body.contains("outcome")) std::cout << "outcome: " << r.body["outcome"].dump() << '\n';
  return 0;
}

int RunServe(const std::string& bundle_dir, int port, const std::string& host,
             const std::string& rl_policy, const std::string& transcripts,
             const std::string& static_dir, const Common& common) {
  const RunConfig config = common.Resolve();
  ServiceOptions options;
  options.bundle = LoadBundle(bundle_dir);
  options.rl_policy = LoadPolicy(rl_policy);
  options.seed = config.episode.seed;
  options.max_turns = config.episode.max_turns;
  options.hybrid = config.hybrid;
  options.generator = config.generator;
  options.transcript_dir = transcripts;
  SessionService service(options);
  std::cerr << "listening on http://" << host << ':' << port << '\n';
  Serve(service, {host, port, static_dir});
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Negotiation dialogue engine"};
  app.require_subcommand(1);

  Common common;
  std::string input, format = "canonical", synthetic, output, parsed_out, corpus, bundle, out;
  std::string reward, partner = "sl_act", agent = "sl_act", agent_b = "sl_act", rl_policy;
  std::string bot = "hybrid", role, host = "127.0.0.1", transcripts, static_dir;
  int count = 200, n = 100, port = 8080;
  double policy_smoothing = SlOptions{}.policy_smoothing;
  std::optional<double> lr;
  std::optional<int> episodes;
  bool csv = false, greedy = false, signed_fairness = false;

  auto* ingest = app.add_subcommand("ingest", "Load a corpus and write it in canonical form");
  ingest->add_option("--input", input, "Corpus file");
  ingest->add_option("--format", format, "canonical | cocoa-import");
  ingest->add_option("--synthetic", synthetic, "Generate a synthetic corpus instead: cb | dn")
      ->check(CLI::IsMember({"cb", "dn"}));
  ingest->add_option("--count", count, "Synthetic dialogue count")->check(CLI::PositiveNumber);
  ingest->add_option("--output", output, "Canonical corpus output")->required();
  ingest->add_option("--parsed", parsed_out, "Also write parsed dialogues as JSON lines");
  AddCommon(ingest, common);

  auto* stats = app.add_subcommand("stats", "Corpus statistics");
  stats->add_option("--corpus", corpus, "Corpus file")->required()->check(CLI::ExistingFile);
  stats->add_option("--format", format, "canonical | cocoa-import");
  AddCommon(stats, common);

  auto* train_sl = app.add_subcommand("train-sl", "Fit parser lexicon, act policy and generator");
  train_sl->add_option("--corpus", corpus, "Canonical corpus")->required()->check(CLI::ExistingFile);
  train_sl->add_option("--out", out, "Bundle directory")->required();
  train_sl->add_option("--policy-smoothing", policy_smoothing, "Laplace smoothing of the policy");
  AddCommon(train_sl, common);

  auto* train_rl = app.add_subcommand("train-rl", "REINFORCE fine-tuning against a fixed partner");
  train_rl->add_option("--bundle", bundle, "Bundle directory")->required();
  train_rl->add_option("--reward", reward, "utility | fairness | length")
      ->required()
      ->check(CLI::IsMember({"utility", "fairness", "length"}));
  train_rl->add_option("--partner", partner, "sl_act | hybrid");
  train_rl->add_option("--corpus", corpus, "Canonical corpus supplying training scenarios");
  train_rl->add_option("--out", out, "Output directory")->required();
  train_rl->add_option("--lr", lr, "Learning rate");
  train_rl->add_option("--episodes", episodes, "Training episodes");
  train_rl->add_flag("--signed-fairness", signed_fairness, "Use -(u_self - u_partner) as fairness");
  AddCommon(train_rl, common);

  auto* selfplay = app.add_subcommand("selfplay", "Run bot-vs-bot episodes");
  selfplay->add_option("--bundle", bundle, "Bundle directory")->required();
  selfplay->add_option("--n", n, "Episodes")->check(CLI::PositiveNumber);
  selfplay->add_option("--a", agent, "Slot 0 agent: sl_act | rl_act | hybrid");
  selfplay->add_option("--b", agent_b, "Slot 1 agent: sl_act | rl_act | hybrid");
  selfplay->add_option("--rl-policy", rl_policy, "policy.json for rl_act");
  selfplay->add_option("--corpus", corpus, "Canonical corpus supplying scenarios");
  selfplay->add_option("--out", output, "Write transcripts as a canonical corpus");
  selfplay->add_flag("--greedy", greedy, "Greedy act decoding");
  AddCommon(selfplay, common);

  auto* eval = app.add_subcommand("eval", "Evaluate an agent against a partner in both roles");
  eval->add_option("--bundle", bundle, "Bundle directory")->required();
  eval->add_option("--agent", agent, "sl_act | rl_act | hybrid");
  eval->add_option("--partner", partner, "sl_act | rl_act | hybrid");
  eval->add_option("--rl-policy", rl_policy, "policy.json for rl_act");
  eval->add_option("--n", n, "Episodes")->check(CLI::PositiveNumber);
  eval->add_option("--corpus", corpus, "Canonical corpus supplying scenarios");
  eval->add_flag("--csv", csv, "CSV output");
  AddCommon(eval, common);

  auto* chat = app.add_subcommand("chat", "Negotiate with a bot in the terminal");
  chat->add_option("--bundle", bundle, "Bundle directory")->required();
  chat->add_option("--bot", bot, "sl_act | rl_act | hybrid");
  chat->add_option("--role", role, "Your role");
  chat->add_option("--rl-policy", rl_policy, "policy.json for rl_act");
  AddCommon(chat, common);

  auto* serve = app.add_subcommand("serve", "HTTP session service");
  serve->add_option("--bundle", bundle, "Bundle directory")->required();
  serve->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--rl-policy", rl_policy, "policy.json for rl_act");
  serve->add_option("--transcripts", transcripts, "Directory for daily JSON-lines transcripts");
  serve->add_option("--static", static_dir, "Static web bundle served at /");
  AddCommon(serve, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return RunIngest(input, format, synthetic, count, output, parsed_out, common);
    if (*stats) return RunStats(corpus, format, common);
    if (*train_sl) return RunTrainSl(corpus, out, policy_smoothing, common);
    if (*train_rl) {
      return RunTrainRl(bundle, reward, partner, corpus, out, lr, episodes, signed_fairness, common);
    }
    if (*selfplay) {
      return RunSelfplay(bundle, agent, agent_b, rl_policy, n, corpus, output, greedy, common);
    }
    if (*eval) return RunEval(bundle, agent, partner, rl_policy, n, corpus, csv, common);
    if (*chat) return RunChat(bundle, bot, role, rl_policy, common);
    if (*serve) return RunServe(bundle, port, host, rl_policy, transcripts, static_dir, common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace
}  // namespace haggle

int main(int argc, char** argv) { return haggle::Main(argc, argv); }
