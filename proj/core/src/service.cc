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

#include "haggle/service.h"

#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <utility>
#include <vector>

#include "haggle/error.h"
#include "haggle/json_io.h"

namespace haggle {

using nlohmann::json;

struct SessionService::Session {
  Session(std::string id, Scenario scenario, Role human, AgentKind bot_kind,
          std::unique_ptr<Agent> bot, Rng rng, std::string created_at)
      : id(std::move(id)),
        state(std::move(scenario)),
        human(human),
        bot_kind(bot_kind),
        bot(std::move(bot)),
        rng(rng),
        created_at(std::move(created_at)) {}

  std::string id;
  DialogueState state;
  Role human;
  AgentKind bot_kind;
  std::unique_ptr<Agent> bot;
  Rng rng;
  std::string created_at;
  std::optional<int> survey;
  std::mutex mutex;
};

namespace {

Response Error(int status, std::string message) {
  return {status, json{{"error", std::move(message)}}};
}

std::tm UtcTime(std::chrono::system_clock::time_point t) {
  const std::time_t seconds = std::chrono::system_clock::to_time_t(t);
  std::tm out{};
  gmtime_r(&seconds, &out);
  return out;
}

std::string FormatTime(std::chrono::system_clock::time_point t, const char* format) {
  const std::tm tm = UtcTime(t);
  std::ostringstream out;
  out << std::put_time(&tm, format);
  return out.str();
}

std::vector<std::string_view> PathSegments(std::string_view path) {
  std::vector<std::string_view> out;
  while (!path.empty()) {
    const auto start = path.find_first_not_of('/');
    if (start == std::string_view::npos) break;
    path.remove_prefix(start);
    const auto end = path.find('/');
    out.push_back(path.substr(0, end));
    if (end == std::string_view::npos) break;
    path.remove_prefix(end);
  }
  return out;
}

Scenario DefaultScenario(Task task, Rng& rng) {
  if (task == Task::kDealOrNoDeal) return SynthDnScenario(rng);
  const auto posting = SynthPostings(rng.Next(), 1).front();
  const auto options = GenerateScenarios(posting);
  return options[static_cast<std::size_t>(rng.UniformInt(static_cast<int>(options.size())))];
}

json OutcomeView(const DialogueState& state) {
  const Outcome outcome = ComputeOutcome(state);
  json out = OutcomeToJson(outcome);
  json utilities = json::object();
  for (int slot = 0; slot < 2; ++slot) {
    utilities[std::string(RoleName(RoleForSlot(state.task(), slot)))] = outcome.utilities[slot];
  }
  out["utilities"] = utilities;
  return out;
}

}  // namespace

json ScenarioView(const Scenario& scenario, Role viewer) {
  json view = ScenarioToJson(scenario);
  if (std::holds_alternative<CBScenario>(scenario)) {
    if (viewer != Role::kBuyer) view.erase("buyer_target");
  } else {
    const std::string own(RoleName(viewer));
    view["values"] = json{{own, view["values"][own]}};
  }
  return view;
}

SessionService::SessionService(ServiceOptions options)
    : options_(std::move(options)),
      parser_(options_.bundle ? options_.bundle->lexicon
                              : throw HaggleError("session service needs an engine bundle")) {
  if (options_.max_turns < 2) throw HaggleError("max_turns must be at least 2");
  if (!options_.transcript_dir.empty()) std::filesystem::create_directories(options_.transcript_dir);
}

SessionService::~SessionService() = default;

Response SessionService::Handle(std::string_view method, std::string_view path,
                                std::string_view body) {
  const auto segments = PathSegments(path.substr(0, path.find('?')));
  if (segments.empty() || segments[0] != "sessions" || segments.size() > 3) {
    return Error(404, "no such route");
  }
  json request = json::object();
  if (method == "POST" && !body.empty()) {
    try {
      request = json::parse(body);
    } catch (const json::parse_error&) {
      return Error(400, "request body is not valid JSON");
    }
    if (!request.is_object()) return Error(400, "request body must be a JSON object");
  }
  if (segments.size() == 1) {
    if (method != "POST") return Error(405, "method not allowed");
    return CreateSession(request);
  }
  const std::string id(segments[1]);
  if (segments.size() == 2) {
    if (method != "GET") return Error(405, "method not allowed");
    return GetSession(id);
  }
  if (method != "POST") return Error(405, "method not allowed");
  if (segments[2] == "events") return PostEvent(id, request);
  if (segments[2] == "survey") return SubmitSurvey(id, request);
  return Error(404, "no such route");
}

Response SessionService::CreateSession(const json& request) {
  const Task task = options_.bundle->task;
  AgentKind kind = AgentKind::kHybrid;
  Role human = RoleForSlot(task, 0);
  std::optional<Scenario> scenario;
  try {
    if (request.contains("bot_kind")) kind = ParseAgentKind(request.at("bot_kind").get<std::string>());
  } catch (const std::exception&) {
    return Error(400, "unknown bot_kind");
  }
  if (kind == AgentKind::kRlAct && !options_.rl_policy) {
    return Error(400, "bot_kind rl_act is not loaded");
  }
  try {
    if (request.contains("human_role")) human = ParseRole(request.at("human_role").get<std::string>());
    if (request.contains("scenario")) scenario = ScenarioFromJson(request.at("scenario"));
  } catch (const std::exception& e) {
    return Error(400, e.what());
  }
  if (TaskOf(human) != task) return Error(400, "human_role does not belong to this task");
  if (scenario && TaskOf(*scenario) != task) return Error(400, "scenario does not match the engine task");

  std::shared_ptr<Session> session;
  {
    std::lock_guard lock(mutex_);
    const std::uint64_t n = next_session_++;
    Rng rng(MixSeed(options_.seed, n));
    std::ostringstream id;
    id << std::hex << std::setw(16) << std::setfill('0') << rng.Next();
    if (!scenario) scenario = DefaultScenario(task, rng);
    AgentSpec spec{kind, options_.bundle, kind == AgentKind::kRlAct ? options_.rl_policy : nullptr,
                   DecodeMode::kSample, options_.hybrid, options_.generator};
    session = std::make_shared<Session>(id.str(), *scenario, human, kind, MakeAgent(spec), rng,
                                        FormatTime(options_.clock(), "%Y-%m-%dT%H:%M:%SZ"));
    sessions_[session->id] = session;
  }
  std::lock_guard lock(session->mutex);
  const int before = session->state.num_events();
  if (Slot(human) == 1) BotMoves(*session);
  json body = View(*session);
  body["bot_events"] = json::array();
  for (int i = before; i < session->state.num_events(); ++i) {
    body["bot_events"].push_back(EventToJson(session->state.events()[i]));
  }
  return {201, body};
}

Response SessionService::GetSession(const std::string& id) {
  const auto session = Find(id);
  if (!session) return Error(404, "unknown session");
  std::lock_guard lock(session->mutex);
  return {200, View(*session)};
}

Response SessionService::PostEvent(const std::string& id, const json& request) {
  const auto session = Find(id);
  if (!session) return Error(404, "unknown session");
  std::lock_guard lock(session->mutex);
  DialogueState& state = session->state;
  if (state.terminal()) return Error(409, "session is over");
  const auto last = state.last_speaker();
  if (last ? *last == session->human : Slot(session->human) != 0) {
    return Error(409, "not your turn");
  }
  DialogueEvent event;
  try {
    event.kind = ParseEventKind(request.at("kind").get<std::string>());
    if (request.contains("text")) event.text = request.at("text").get<std::string>();
    if (request.contains("price")) event.price = MoneyFromJson(request.at("price"));
    if (request.contains("split")) event.split = SplitFromJson(request.at("split"));
  } catch (const std::exception& e) {
    return Error(400, std::string("bad event: ") + e.what());
  }
  const auto& pending = state.pending_offer();
  if (pending && pending->role != session->human && event.kind != EventKind::kAccept &&
      event.kind != EventKind::kReject && event.kind != EventKind::kQuit) {
    return Error(422, "answer the offer first");
  }
  event.turn = state.num_events();
  event.role = session->human;
  try {
    event.Validate();
  } catch (const HaggleError& e) {
    return Error(400, e.what());
  }
  const int before = state.num_events();
  try {
    state.Append(event, parser_.Parse(event, ParseContext::ForNextEvent(state, session->human)));
  } catch (const HaggleError& e) {
    return Error(422, e.what());
  }
  if (!state.terminal() && state.num_events() >= options_.max_turns) state.EndWithoutAgreement();
  if (!state.terminal()) BotMoves(*session);
  if (state.terminal()) {
    Persist({{"type", "transcript"},
             {"session_id", session->id},
             {"bot_kind", AgentKindName(session->bot_kind)},
             {"human_role", RoleName(session->human)},
             {"created_at", session->created_at},
             {"record", CorpusToJson(std::vector{RecordOf(*session)})[0]}});
  }
  json body = View(*session);
  body["bot_events"] = json::array();
  for (int i = before + 1; i < state.num_events(); ++i) {
    body["bot_events"].push_back(EventToJson(state.events()[i]));
  }
  return {200, body};
}

Response SessionService::SubmitSurvey(const std::string& id, const json& request) {
  const auto session = Find(id);
  if (!session) return Error(404, "unknown session");
  std::lock_guard lock(session->mutex);
  if (!session->state.terminal()) return Error(409, "survey opens when the dialogue ends");
  const auto it = request.find("score");
  if (it == request.end() || !it->is_number_integer()) return Error(422, "score must be an integer");
  const int score = it->get<int>();
  if (score < 1 || score > 5) return Error(422, "score must be between 1 and 5");
  session->survey = score;
  Persist({{"type", "survey"}, {"session_id", session->id}, {"score", score}});
  return {200, View(*session)};
}

DialogueRecord SessionService::Export(const std::string& id) const {
  const auto session = Find(id);
  if (!session) throw HaggleError("unknown session " + id);
  std::lock_guard lock(session->mutex);
  return RecordOf(*session);
}

DialogueRecord SessionService::RecordOf(const Session& session) {
  const DialogueState& state = session.state;
  DialogueRecord record{session.id, state.scenario(), state.events(), std::nullopt};
  if (state.terminal()) record.outcome = ComputeOutcome(state);
  return record;
}

std::shared_ptr<SessionService::Session> SessionService::Find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

void SessionService::BotMoves(Session& session) {
  DialogueState& state = session.state;
  const Role bot = Partner(session.human);
  AgentTurn turn = session.bot->Act(state, bot, session.rng);
  turn.event.turn = state.num_events();
  turn.event.role = bot;
  state.Append(turn.event, parser_.Parse(turn.event, ParseContext::ForNextEvent(state, bot)));
  if (!state.terminal() && state.num_events() >= options_.max_turns) state.EndWithoutAgreement();
}

json SessionService::View(const Session& session) const {
  const DialogueState& state = session.state;
  json events = json::array();
  for (const auto& e : state.events()) events.push_back(EventToJson(e));
  json view = {{"session_id", session.id},
               {"task", state.task() == Task::kCraigslist ? "cb" : "dn"},
               {"human_role", RoleName(session.human)},
               {"bot_kind", AgentKindName(session.bot_kind)},
               {"created_at", session.created_at},
               {"scenario", ScenarioView(state.scenario(), session.human)},
               {"events", events},
               {"status", StatusName(state.status())},
               {"max_turns", options_.max_turns}};
  if (!state.terminal()) {
    const auto last = state.last_speaker();
    view["your_turn"] = last ? *last != session.human : Slot(session.human) == 0;
  } else {
    view["your_turn"] = false;
    view["outcome"] = OutcomeView(state);
  }
  if (const auto& pending = state.pending_offer()) {
    json offer = {{"role", RoleName(pending->role)}};
    if (pending->act.price) offer["price"] = MoneyToJson(*pending->act.price);
    if (pending->act.split) offer["split"] = SplitToJson(*pending->act.split);
    view["pending_offer"] = offer;
  }
  if (session.survey) view["survey"] = *session.survey;
  return view;
}

void SessionService::Persist(const json& line) {
  if (options_.transcript_dir.empty()) return;
  const auto path =
      options_.transcript_dir / (FormatTime(options_.clock(), "%Y-%m-%d") + ".jsonl");
  std::lock_guard lock(file_mutex_);
  std::ofstream out(path, std::ios::app);
  if (!out) throw HaggleError("cannot open transcript file " + path.string());
  out << line.dump() << '\n';
}

}  // namespace haggle
