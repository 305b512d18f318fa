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

#ifndef HAGGLE_JSON_IO_H_
#define HAGGLE_JSON_IO_H_

#include <nlohmann/json.hpp>

#include "haggle/money.h"
#include "haggle/types.h"

namespace haggle {

// JSON forms shared by corpus files, engine bundles and the HTTP API.
// Readers throw SchemaError on missing fields, wrong types or unknown keys.

nlohmann::json MoneyToJson(Money m);
Money MoneyFromJson(const nlohmann::json& j);

// {"agent_a": {"book": 1, ...}, "agent_b": {...}}; unset shares omitted.
nlohmann::json SplitToJson(const Split& split);
Split SplitFromJson(const nlohmann::json& j);

nlohmann::json ActToJson(const CoarseDialogueAct& act);
CoarseDialogueAct ActFromJson(const nlohmann::json& j);

nlohmann::json EventToJson(const DialogueEvent& event);
DialogueEvent EventFromJson(const nlohmann::json& j);

// {"kind": "cb", "category", "title", "description", "listing_price",
// "buyer_target"} or {"kind": "dn", "counts", "values": {"agent_a",
// "agent_b"}}.
nlohmann::json ScenarioToJson(const Scenario& scenario);
Scenario ScenarioFromJson(const nlohmann::json& j);

nlohmann::json OutcomeToJson(const Outcome& outcome);
Outcome OutcomeFromJson(const nlohmann::json& j);

}  // namespace haggle

#endif  // HAGGLE_JSON_IO_H_
