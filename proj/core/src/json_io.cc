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

#include "haggle/json_io.h"

#include <cmath>
#include <initializer_list>
#include <string>

#include "haggle/error.h"

namespace haggle {
namespace {

using nlohmann::json;

void RequireObject(const json& j, std::string_view what) {
  if (!j.is_object()) throw SchemaError(std::string(what) + " must be an object");
}

void OnlyKeys(const json& j, std::string_view what, std::initializer_list<std::string_view> keys) {
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const auto key : keys) known = known || key == k;
    if (!known) throw SchemaError(std::string(what) + ": unknown field '" + k + "'");
  }
}

const json& Field(const json& j, std::string_view what, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string(what) + ": missing field '" + key + "'");
  return *it;
}

std::string StringField(const json& j, std::string_view what, const char* key) {
  const json& v = Field(j, what, key);
  if (!v.is_string()) throw SchemaError(std::string(what) + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

int IntValue(const json& v, std::string_view what) {
  if (!v.is_number_integer()) throw SchemaError(std::string(what) + " must be an integer");
  return v.get<int>();
}

json CountsToJson(const ItemCounts& counts) {
  json out = json::object();
  for (Item item : kAllItems) out[std::string(ItemName(item))] = counts[static_cast<int>(item)];
  return out;
}

ItemCounts CountsFromJson(const json& j, std::string_view what) {
  RequireObject(j, what);
  OnlyKeys(j, what, {"book", "hat", "ball"});
  ItemCounts out{};
  for (Item item : kAllItems) {
    out[static_cast<int>(item)] =
        IntValue(Field(j, what, std::string(ItemName(item)).c_str()), what);
  }
  return out;
}

// Wraps lower-level errors so callers see a single exception family.
template <typename F>
auto Wrap(std::string_view what, F&& f) {
  try {
    return f();
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

json MoneyToJson(Money m) {
  if (m.cents() % 100 == 0) return m.cents() / 100;
  return m.dollars();
}

Money MoneyFromJson(const json& j) {
  if (!j.is_number()) throw SchemaError("price must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v) || v < 0) throw SchemaError("price must be finite and non-negative");
  return Money::FromDollars(v);
}

json SplitToJson(const Split& split) {
  json out = json::object();
  for (int slot = 0; slot < 2; ++slot) {
    json side = json::object();
    for (int i = 0; i < kNumItems; ++i) {
      if (const auto& v = split.allocation[slot][i]) side[std::string(ItemName(kAllItems[i]))] = *v;
    }
    if (!side.empty()) out[slot == 0 ? "agent_a" : "agent_b"] = side;
  }
  return out;
}

Split SplitFromJson(const json& j) {
  RequireObject(j, "split");
  OnlyKeys(j, "split", {"agent_a", "agent_b"});
  Split split;
  for (int slot = 0; slot < 2; ++slot) {
    const auto it = j.find(slot == 0 ? "agent_a" : "agent_b");
    if (it == j.end()) continue;
    RequireObject(*it, "split side");
    for (const auto& [name, v] : it->items()) {
      const Item item = Wrap("split", [&] { return ParseItem(name); });
      const int count = IntValue(v, "split count");
      if (count < 0) throw SchemaError("split count must be non-negative");
      split.allocation[slot][static_cast<int>(item)] = count;
    }
  }
  return split;
}

json ActToJson(const CoarseDialogueAct& act) {
  json out = {{"intent", IntentName(act.intent)}};
  if (act.price) out["price"] = MoneyToJson(*act.price);
  if (act.split) out["split"] = SplitToJson(*act.split);
  return out;
}

CoarseDialogueAct ActFromJson(const json& j) {
  RequireObject(j, "act");
  OnlyKeys(j, "act", {"intent", "price", "split"});
  CoarseDialogueAct act;
  act.intent = Wrap("act", [&] { return ParseIntent(StringField(j, "act", "intent")); });
  if (j.contains("price")) act.price = MoneyFromJson(j["price"]);
  if (j.contains("split")) act.split = SplitFromJson(j["split"]);
  return act;
}

json EventToJson(const DialogueEvent& e) {
  json out = {{"turn", e.turn}, {"role", RoleName(e.role)}, {"kind", EventKindName(e.kind)}};
  if (e.text) out["text"] = *e.text;
  if (e.price) out["price"] = MoneyToJson(*e.price);
  if (e.split) out["split"] = SplitToJson(*e.split);
  return out;
}

DialogueEvent EventFromJson(const json& j) {
  RequireObject(j, "event");
  OnlyKeys(j, "event", {"turn", "role", "kind", "text", "price", "split"});
  DialogueEvent e;
  e.turn = IntValue(Field(j, "event", "turn"), "event turn");
  e.role = Wrap("event", [&] { return ParseRole(StringField(j, "event", "role")); });
  e.kind = Wrap("event", [&] { return ParseEventKind(StringField(j, "event", "kind")); });
  if (j.contains("text")) e.text = StringField(j, "event", "text");
  if (j.contains("price")) e.price = MoneyFromJson(j["price"]);
  if (j.contains("split")) e.split = SplitFromJson(j["split"]);
  Wrap("event", [&] {
    e.Validate();
    return 0;
  });
  return e;
}

json ScenarioToJson(const Scenario& scenario) {
  if (const auto* cb = std::get_if<CBScenario>(&scenario)) {
    return {{"kind", "cb"},
            {"category", cb->category},
            {"title", cb->title},
            {"description", cb->description},
            {"listing_price", MoneyToJson(cb->listing_price)},
            {"buyer_target", MoneyToJson(cb->buyer_target)}};
  }
  const auto& dn = std::get<DNScenario>(scenario);
  return {{"kind", "dn"},
          {"counts", CountsToJson(dn.counts)},
          {"values", {{"agent_a", CountsToJson(dn.values[0])}, {"agent_b", CountsToJson(dn.values[1])}}}};
}

Scenario ScenarioFromJson(const json& j) {
  RequireObject(j, "scenario");
  const std::string kind = StringField(j, "scenario", "kind");
  Scenario out;
  if (kind == "cb") {
    OnlyKeys(j, "scenario",
             {"kind", "category", "title", "description", "listing_price", "buyer_target"});
    CBScenario cb;
    cb.category = StringField(j, "scenario", "category");
    cb.title = StringField(j, "scenario", "title");
    cb.description = StringField(j, "scenario", "description");
    cb.listing_price = MoneyFromJson(Field(j, "scenario", "listing_price"));
    cb.buyer_target = MoneyFromJson(Field(j, "scenario", "buyer_target"));
    out = cb;
  } else if (kind == "dn") {
    OnlyKeys(j, "scenario", {"kind", "counts", "values"});
    DNScenario dn;
    dn.counts = CountsFromJson(Field(j, "scenario", "counts"), "counts");
    const json& values = Field(j, "scenario", "values");
    RequireObject(values, "values");
    OnlyKeys(values, "values", {"agent_a", "agent_b"});
    dn.values[0] = CountsFromJson(Field(values, "values", "agent_a"), "values");
    dn.values[1] = CountsFromJson(Field(values, "values", "agent_b"), "values");
    out = dn;
  } else {
    throw SchemaError("scenario kind must be 'cb' or 'dn'");
  }
  Wrap("scenario", [&] {
    ValidateScenario(out);
    return 0;
  });
  return out;
}

json OutcomeToJson(const Outcome& o) {
  json out = {{"agreement", o.agreement}};
  if (o.final_price) out["final_price"] = MoneyToJson(*o.final_price);
  if (o.final_split) out["final_split"] = SplitToJson(*o.final_split);
  return out;
}

Outcome OutcomeFromJson(const json& j) {
  RequireObject(j, "outcome");
  OnlyKeys(j, "outcome", {"agreement", "final_price", "final_split"});
  Outcome o;
  const json& a = Field(j, "outcome", "agreement");
  if (!a.is_boolean()) throw SchemaError("outcome: 'agreement' must be a boolean");
  o.agreement = a.get<bool>();
  if (j.contains("final_price")) o.final_price = MoneyFromJson(j["final_price"]);
  if (j.contains("final_split")) o.final_split = SplitFromJson(j["final_split"]);
  return o;
}

}  // namespace haggle
