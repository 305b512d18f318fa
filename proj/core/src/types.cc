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

#include "haggle/types.h"

#include <algorithm>
#include <sstream>

#include "haggle/error.h"
#include "haggle/pricing.h"

namespace haggle {
namespace {

constexpr std::array<std::string_view, kNumIntents> kIntentNames = {
    "greet",    "inquire", "inform", "propose", "counter", "agree",
    "disagree", "offer",   "accept", "reject",  "quit",    "unknown"};

constexpr std::array<std::string_view, 5> kEventKindNames = {"message", "offer", "accept",
                                                             "reject", "quit"};

std::string FormatDollars(Money m) {
  std::ostringstream out;
  out << m.dollars();
  return out.str();
}

}  // namespace

int Slot(Role role) { return (role == Role::kBuyer || role == Role::kAgentA) ? 0 : 1; }

Role Partner(Role role) {
  switch (role) {
    case Role::kBuyer: return Role::kSeller;
    case Role::kSeller: return Role::kBuyer;
    case Role::kAgentA: return Role::kAgentB;
    case Role::kAgentB: return Role::kAgentA;
  }
  throw HaggleError("bad role");
}

Task TaskOf(Role role) {
  return (role == Role::kBuyer || role == Role::kSeller) ? Task::kCraigslist
                                                         : Task::kDealOrNoDeal;
}

Role RoleForSlot(Task task, int slot) {
  if (slot != 0 && slot != 1) throw HaggleError("slot must be 0 or 1");
  if (task == Task::kCraigslist) return slot == 0 ? Role::kBuyer : Role::kSeller;
  return slot == 0 ? Role::kAgentA : Role::kAgentB;
}

std::string_view RoleName(Role role) {
  switch (role) {
    case Role::kBuyer: return "buyer";
    case Role::kSeller: return "seller";
    case Role::kAgentA: return "agent_a";
    case Role::kAgentB: return "agent_b";
  }
  return "?";
}

Role ParseRole(std::string_view name) {
  if (name == "buyer") return Role::kBuyer;
  if (name == "seller") return Role::kSeller;
  if (name == "agent_a") return Role::kAgentA;
  if (name == "agent_b") return Role::kAgentB;
  throw HaggleError("unknown role '" + std::string(name) + "'");
}

std::string_view ItemName(Item item) {
  switch (item) {
    case Item::kBook: return "book";
    case Item::kHat: return "hat";
    case Item::kBall: return "ball";
  }
  return "?";
}

Item ParseItem(std::string_view name) {
  for (Item item : kAllItems) {
    if (ItemName(item) == name) return item;
  }
  throw HaggleError("unknown item '" + std::string(name) + "'");
}

void CBScenario::Validate() const {
  if (listing_price == buyer_target) throw HaggleError("degenerate midpoint");
  if (buyer_target.cents() <= 0 || buyer_target >= listing_price) {
    throw HaggleError("CB scenario requires 0 < buyer_target < listing_price");
  }
}

void DNScenario::Validate() const {
  for (int c : counts) {
    if (c < 1 || c > kDNMaxCount) throw HaggleError("DN item counts must lie in [1, 4]");
  }
  for (const ItemCounts& row : values) {
    int total = 0;
    for (int i = 0; i < kNumItems; ++i) {
      if (row[i] < 0) throw HaggleError("DN values must be non-negative");
      total += row[i] * counts[i];
    }
    if (total != kDNValueTotal) throw HaggleError("DN values must total 10 per role");
  }
}

Task TaskOf(const Scenario& scenario) {
  return std::holds_alternative<CBScenario>(scenario) ? Task::kCraigslist : Task::kDealOrNoDeal;
}

void ValidateScenario(const Scenario& scenario) {
  std::visit([](const auto& s) { s.Validate(); }, scenario);
}

std::string_view IntentName(Intent intent) { return kIntentNames[static_cast<int>(intent)]; }

Intent ParseIntent(std::string_view name) {
  for (int i = 0; i < kNumIntents; ++i) {
    if (kIntentNames[i] == name) return static_cast<Intent>(i);
  }
  throw HaggleError("unknown intent '" + std::string(name) + "'");
}

bool IsStructural(Intent intent) {
  return intent == Intent::kOffer || intent == Intent::kAccept || intent == Intent::kReject ||
         intent == Intent::kQuit;
}

bool TakesArgument(Intent intent) {
  return intent == Intent::kPropose || intent == Intent::kCounter || intent == Intent::kOffer;
}

bool Split::Empty() const {
  for (const auto& side : allocation) {
    for (const auto& v : side) {
      if (v.has_value()) return false;
    }
  }
  return true;
}

bool Split::IsComplete(const ItemCounts& counts) const {
  for (int i = 0; i < kNumItems; ++i) {
    const auto& a = allocation[0][i];
    const auto& b = allocation[1][i];
    if (!a || !b || *a < 0 || *b < 0 || *a + *b != counts[i]) return false;
  }
  return true;
}

Split Split::Completed(const ItemCounts& counts) const {
  Split out = *this;
  for (int i = 0; i < kNumItems; ++i) {
    auto& a = out.allocation[0][i];
    auto& b = out.allocation[1][i];
    if (a && !b) b = std::max(0, counts[i] - *a);
    if (b && !a) a = std::max(0, counts[i] - *b);
  }
  return out;
}

ItemCounts Split::Share(int slot) const {
  ItemCounts share{};
  for (int i = 0; i < kNumItems; ++i) share[i] = allocation[slot][i].value_or(0);
  return share;
}

Split Split::FromShare(int slot, const ItemCounts& share, const ItemCounts& counts) {
  Split split;
  for (int i = 0; i < kNumItems; ++i) {
    split.allocation[slot][i] = share[i];
    split.allocation[1 - slot][i] = counts[i] - share[i];
  }
  return split;
}

std::string CoarseDialogueAct::ToString() const {
  std::string out(IntentName(intent));
  if (price) {
    out += "(" + FormatDollars(*price) + ")";
  } else if (split) {
    out += "(";
    for (int slot = 0; slot < 2; ++slot) {
      if (slot == 1) out += ";";
      bool first = true;
      for (int i = 0; i < kNumItems; ++i) {
        if (!split->allocation[slot][i]) continue;
        if (!first) out += ",";
        out += std::string(ItemName(kAllItems[i])) + "=" +
               std::to_string(*split->allocation[slot][i]);
        first = false;
      }
    }
    out += ")";
  }
  return out;
}

void ValidateAct(const CoarseDialogueAct& act, Task task) {
  const bool needs_arg = TakesArgument(act.intent);
  if (task == Task::kCraigslist) {
    if (act.split) throw HaggleError("CB acts never carry a split");
    if (needs_arg != act.price.has_value()) {
      throw HaggleError("act '" + act.ToString() + "' has a misplaced price argument");
    }
  } else {
    if (act.price) throw HaggleError("DN acts never carry a price");
    if (needs_arg != act.split.has_value()) {
      throw HaggleError("act '" + act.ToString() + "' has a misplaced split argument");
    }
  }
}

std::string_view EventKindName(EventKind kind) { return kEventKindNames[static_cast<int>(kind)]; }

EventKind ParseEventKind(std::string_view name) {
  for (int i = 0; i < static_cast<int>(kEventKindNames.size()); ++i) {
    if (kEventKindNames[i] == name) return static_cast<EventKind>(i);
  }
  throw HaggleError("unknown event kind '" + std::string(name) + "'");
}

void DialogueEvent::Validate() const {
  if (turn < 0) throw HaggleError("event turn must be non-negative");
  if (kind == EventKind::kMessage && !text) throw HaggleError("message event without text");
  if (kind == EventKind::kOffer && !price && !split) {
    throw HaggleError("offer event without price or split");
  }
}

std::string_view StatusName(DialogueStatus status) {
  switch (status) {
    case DialogueStatus::kActive: return "active";
    case DialogueStatus::kAgreed: return "agreed";
    case DialogueStatus::kNoAgreement: return "no_agreement";
  }
  return "?";
}

DialogueState::DialogueState(Scenario scenario) : scenario_(std::move(scenario)) {
  ValidateScenario(scenario_);
}

std::optional<Role> DialogueState::last_speaker() const {
  if (events_.empty()) return std::nullopt;
  return events_.back().role;
}

void DialogueState::Append(DialogueEvent event, CoarseDialogueAct act) {
  if (terminal()) throw HaggleError("dialogue is already over");
  event.Validate();
  if (TaskOf(event.role) != task()) throw HaggleError("event role does not belong to this task");
  if (!events_.empty()) {
    if (event.role == events_.back().role) throw HaggleError("out of turn: roles must alternate");
    if (event.turn <= events_.back().turn) throw HaggleError("turn indices must increase");
  }
  if (pending_offer_ && (event.kind == EventKind::kMessage || event.kind == EventKind::kOffer)) {
    throw HaggleError("answer the offer first");
  }
  if ((event.kind == EventKind::kAccept || event.kind == EventKind::kReject) && !pending_offer_) {
    throw HaggleError("no pending offer to answer");
  }
  if (event.kind == EventKind::kOffer) {
    if (task() == Task::kCraigslist && !event.price) throw HaggleError("CB offer needs a price");
    if (task() == Task::kDealOrNoDeal) {
      if (!event.split) throw HaggleError("DN offer needs a split");
      if (!event.split->IsComplete(std::get<DNScenario>(scenario_).counts)) {
        throw HaggleError("DN offer split must be complete");
      }
    }
  }

  const int slot = Slot(event.role);
  switch (event.kind) {
    case EventKind::kMessage:
      if (TakesArgument(act.intent) && (act.price || act.split)) proposals_[slot] = act;
      break;
    case EventKind::kOffer: {
      CoarseDialogueAct offer{Intent::kOffer, event.price, event.split};
      pending_offer_ = PendingOffer{event.role, offer};
      proposals_[slot] = offer;
      break;
    }
    case EventKind::kAccept:
      final_price_ = pending_offer_->act.price;
      final_split_ = pending_offer_->act.split;
      pending_offer_.reset();
      status_ = DialogueStatus::kAgreed;
      break;
    case EventKind::kReject:
      pending_offer_.reset();
      status_ = DialogueStatus::kNoAgreement;
      break;
    case EventKind::kQuit:
      pending_offer_.reset();
      status_ = DialogueStatus::kNoAgreement;
      break;
  }
  events_.push_back(std::move(event));
  acts_.push_back(std::move(act));
}

void DialogueState::EndWithoutAgreement() {
  if (terminal()) throw HaggleError("dialogue is already over");
  pending_offer_.reset();
  status_ = DialogueStatus::kNoAgreement;
}

Outcome ComputeOutcome(const DialogueState& state) {
  if (!state.terminal()) throw HaggleError("outcome requires a finished dialogue");
  Outcome outcome;
  outcome.num_turns = state.num_events();
  outcome.agreement = state.status() == DialogueStatus::kAgreed;
  if (!outcome.agreement) return outcome;
  outcome.final_price = state.final_price();
  outcome.final_split = state.final_split();
  const Task task = state.task();
  for (int slot = 0; slot < 2; ++slot) {
    const Role role = RoleForSlot(task, slot);
    if (task == Task::kCraigslist) {
      outcome.utilities[slot] =
          Utility(role, std::get<CBScenario>(state.scenario()), *outcome.final_price);
    } else {
      outcome.utilities[slot] =
          DnUtility(role, std::get<DNScenario>(state.scenario()), *outcome.final_split);
    }
  }
  return outcome;
}

}  // namespace haggle
