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

#ifndef HAGGLE_TYPES_H_
#define HAGGLE_TYPES_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "haggle/money.h"

namespace haggle {

// CB: the Craigslist bargaining task (price). DN: the item-division task.
enum class Task { kCraigslist, kDealOrNoDeal };

enum class Role { kBuyer, kSeller, kAgentA, kAgentB };

// Each dialogue has two participants; a slot is 0 (buyer / agent_a) or 1.
int Slot(Role role);
Role Partner(Role role);
Task TaskOf(Role role);
Role RoleForSlot(Task task, int slot);
std::string_view RoleName(Role role);
Role ParseRole(std::string_view name);

enum class Item { kBook = 0, kHat = 1, kBall = 2 };
inline constexpr int kNumItems = 3;
inline constexpr std::array<Item, kNumItems> kAllItems = {Item::kBook, Item::kHat,
                                                         Item::kBall};
using ItemCounts = std::array<int, kNumItems>;

std::string_view ItemName(Item item);  // singular: "book"
Item ParseItem(std::string_view name);

struct CBScenario {
  std::string category;
  std::string title;
  std::string description;
  Money listing_price;
  Money buyer_target;

  // Throws unless 0 < buyer_target < listing_price.
  void Validate() const;
};

struct DNScenario {
  ItemCounts counts{};
  // values[slot][item]; each row dotted with counts must equal kDNValueTotal.
  std::array<ItemCounts, 2> values{};

  void Validate() const;
};

inline constexpr int kDNValueTotal = 10;
inline constexpr int kDNMaxCount = 4;

using Scenario = std::variant<CBScenario, DNScenario>;

Task TaskOf(const Scenario& scenario);
void ValidateScenario(const Scenario& scenario);

enum class Intent {
  kGreet,
  kInquire,
  kInform,
  kPropose,
  kCounter,
  kAgree,
  kDisagree,
  kOffer,
  kAccept,
  kReject,
  kQuit,
  kUnknown,
};
inline constexpr int kNumIntents = 12;

std::string_view IntentName(Intent intent);
Intent ParseIntent(std::string_view name);
// offer/accept/reject/quit come only from structural events.
bool IsStructural(Intent intent);
// propose/counter/offer carry a price (CB) or a split (DN).
bool TakesArgument(Intent intent);

// Item allocation per slot. An unset entry means the utterance did not say.
struct Split {
  std::array<std::array<std::optional<int>, kNumItems>, 2> allocation{};

  bool Empty() const;
  // Every entry set and each item's two shares sum to its count.
  bool IsComplete(const ItemCounts& counts) const;
  // Fills an unset share from the other side's share; items unmentioned on
  // both sides stay unset.
  Split Completed(const ItemCounts& counts) const;
  // Share of the given slot, with unset entries read as zero.
  ItemCounts Share(int slot) const;

  static Split FromShare(int slot, const ItemCounts& share, const ItemCounts& counts);

  bool operator==(const Split&) const = default;
};

// Coarse dialogue act: an intent plus at most one argument.
struct CoarseDialogueAct {
  Intent intent = Intent::kUnknown;
  std::optional<Money> price;
  std::optional<Split> split;

  static CoarseDialogueAct Of(Intent intent) { return {intent, std::nullopt, std::nullopt}; }
  static CoarseDialogueAct WithPrice(Intent intent, Money price) {
    return {intent, price, std::nullopt};
  }
  static CoarseDialogueAct WithSplit(Intent intent, Split split) {
    return {intent, std::nullopt, std::move(split)};
  }

  // "propose(150)", "counter(197.5)", "greet".
  std::string ToString() const;

  bool operator==(const CoarseDialogueAct&) const = default;
};

// Throws unless the act's argument presence matches its intent for the task.
void ValidateAct(const CoarseDialogueAct& act, Task task);

enum class EventKind { kMessage, kOffer, kAccept, kReject, kQuit };

std::string_view EventKindName(EventKind kind);
EventKind ParseEventKind(std::string_view name);

struct DialogueEvent {
  int turn = 0;
  Role role = Role::kBuyer;
  EventKind kind = EventKind::kMessage;
  std::optional<std::string> text;
  std::optional<Money> price;
  std::optional<Split> split;

  void Validate() const;

  bool operator==(const DialogueEvent&) const = default;
};

enum class DialogueStatus { kActive, kAgreed, kNoAgreement };

std::string_view StatusName(DialogueStatus status);

struct PendingOffer {
  Role role;
  CoarseDialogueAct act;
};

// Event history with the parallel act history and negotiation bookkeeping.
// Append enforces turn alternation, the offer lifecycle, and the
// active -> {agreed, no_agreement} transition.
class DialogueState {
 public:
  explicit DialogueState(Scenario scenario);

  const Scenario& scenario() const { return scenario_; }
  Task task() const { return TaskOf(scenario_); }
  const std::vector<DialogueEvent>& events() const { return events_; }
  const std::vector<CoarseDialogueAct>& acts() const { return acts_; }
  DialogueStatus status() const { return status_; }
  bool terminal() const { return status_ != DialogueStatus::kActive; }
  int num_events() const { return static_cast<int>(events_.size()); }

  // Latest propose/counter/offer of each slot.
  const std::optional<CoarseDialogueAct>& proposal(int slot) const { return proposals_[slot]; }
  const std::optional<PendingOffer>& pending_offer() const { return pending_offer_; }
  const std::optional<Money>& final_price() const { return final_price_; }
  const std::optional<Split>& final_split() const { return final_split_; }

  // Role that may speak next; nullopt before the first event.
  std::optional<Role> last_speaker() const;

  // Throws HaggleError on a contract violation and leaves the state unchanged.
  void Append(DialogueEvent event, CoarseDialogueAct act);
  // Closes an active dialogue without agreement (turn limit).
  void EndWithoutAgreement();

 private:
  Scenario scenario_;
  std::vector<DialogueEvent> events_;
  std::vector<CoarseDialogueAct> acts_;
  std::array<std::optional<CoarseDialogueAct>, 2> proposals_;
  std::optional<PendingOffer> pending_offer_;
  std::optional<Money> final_price_;
  std::optional<Split> final_split_;
  DialogueStatus status_ = DialogueStatus::kActive;
};

struct Outcome {
  bool agreement = false;
  std::optional<Money> final_price;
  std::optional<Split> final_split;
  // Indexed by slot. Zero for both slots without agreement.
  std::array<double, 2> utilities{};
  int num_turns = 0;
};

// Requires a terminal dialogue.
Outcome ComputeOutcome(const DialogueState& state);

}  // namespace haggle

#endif  // HAGGLE_TYPES_H_
