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

#ifndef HAGGLE_SERVICE_H_
#define HAGGLE_SERVICE_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "haggle/corpus.h"
#include "haggle/simulator.h"

namespace haggle {

struct ServiceOptions {
  std::shared_ptr<const EngineBundle> bundle;
  // RL act policy offered as bot kind "rl_act"; absent means not available.
  std::shared_ptr<const PolicyParams> rl_policy;
  std::uint64_t seed = 0;
  int max_turns = 20;
  HybridConfig hybrid;
  GeneratorConfig generator;
  // Daily JSON-lines transcripts go here; empty disables persistence.
  std::filesystem::path transcript_dir;
  std::function<std::chrono::system_clock::time_point()> clock = std::chrono::system_clock::now;
};

struct Response {
  int status = 200;
  nlohmann::json body;
};

// Human-vs-bot sessions behind a small JSON router. Thread-safe: sessions are
// independent and requests on one session are serialized.
class SessionService {
 public:
  explicit SessionService(ServiceOptions options);
  ~SessionService();

  // Routes POST /sessions, GET /sessions/{id}, POST /sessions/{id}/events and
  // POST /sessions/{id}/survey.
  Response Handle(std::string_view method, std::string_view path, std::string_view body);

  Response CreateSession(const nlohmann::json& request);
  Response GetSession(const std::string& id);
  Response PostEvent(const std::string& id, const nlohmann::json& request);
  Response SubmitSurvey(const std::string& id, const nlohmann::json& request);

  // Canonical corpus record of a session's dialogue; throws for unknown ids.
  DialogueRecord Export(const std::string& id) const;

 private:
  struct Session;

  static DialogueRecord RecordOf(const Session& session);
  std::shared_ptr<Session> Find(const std::string& id) const;
  void BotMoves(Session& session);
  nlohmann::json View(const Session& session) const;
  void Persist(const nlohmann::json& line);

  ServiceOptions options_;
  Parser parser_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_session_ = 0;
  std::mutex file_mutex_;
};

// Scenario as seen by `viewer`: the buyer target is shown only to the buyer
// and DN values only for the viewer's own side.
nlohmann::json ScenarioView(const Scenario& scenario, Role viewer);

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  // Static web bundle mounted at "/" when non-empty.
  std::filesystem::path static_dir;
};

// Blocks serving `service` over HTTP until the process is stopped.
void Serve(SessionService& service, const ServeOptions& options);

}  // namespace haggle

#endif  // HAGGLE_SERVICE_H_
