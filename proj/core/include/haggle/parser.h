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

#ifndef HAGGLE_PARSER_H_
#define HAGGLE_PARSER_H_

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "haggle/money.h"
#include "haggle/tokenizer.h"
#include "haggle/types.h"

namespace haggle {

// Words seen immediately left and right of "$"-marked prices in training
// utterances. Utterance edges appear as kBoundaryLeft / kBoundaryRight.
struct PriceLexicon {
  static constexpr std::string_view kBoundaryLeft = "<bos>";
  static constexpr std::string_view kBoundaryRight = "<eos>";

  std::set<std::string> left_neighbors;
  std::set<std::string> right_neighbors;

  // {"left": [...], "right": [...]}; arrays are sorted.
  nlohmann::json ToJson() const;
  static PriceLexicon FromJson(const nlohmann::json& j);

  bool operator==(const PriceLexicon&) const = default;
};

PriceLexicon BuildPriceLexicon(std::span<const std::string> utterances);

struct DetectedPrice {
  std::size_t token_index;
  Money price;
};

// A number is a price iff it carries "$", or both its neighbors are in the
// lexicon and it is at most 1.5x the listing price. Textual order.
std::vector<DetectedPrice> DetectPrices(std::span<const Token> tokens, const CBScenario& scenario,
                                        const PriceLexicon& lexicon);

inline constexpr double kNeighborPriceCap = 1.5;

// What the parser sees besides the utterance: the scenario, the history
// before this event and who is speaking.
struct ParseContext {
  const Scenario& scenario;
  std::span<const DialogueEvent> prior_events;
  std::span<const CoarseDialogueAct> prior_acts;
  Role speaker;

  static ParseContext ForNextEvent(const DialogueState& state, Role speaker) {
    return {state.scenario(), state.events(), state.acts(), speaker};
  }
};

// Version tag of the ordered intent rule list below.
inline constexpr std::string_view kIntentRulesVersion = "ordered-rules/1";

// First matching rule wins:
//   1 greet    greeting word in the first two events, no argument
//   2 counter  argument, and the partner's latest proposal differs (bin/split)
//   3 propose  argument otherwise
//   4 disagree negation keyword
//   5 agree    agreement keyword
//   6 inquire  "?" anywhere, or a leading wh-word / auxiliary
//   7 inform   non-empty message right after a partner inquire
//   8 unknown
// `argument` is the last detected price (CB) or the non-empty split (DN).
Intent ClassifyIntent(std::span<const Token> tokens, const std::optional<Money>& price,
                      const std::optional<Split>& split, const ParseContext& context);

// Left-to-right grouping of (count, object) pairs with the most recently
// mentioned agent (default: the speaker). Plural objects without a count
// take the scenario's full count; singular ones take 1.
Split ParseDnSplit(std::span<const Token> tokens, const DNScenario& scenario, Role speaker);

// Indices of tokens that belong to the split expression (pronouns, counts,
// objects) as recognized by ParseDnSplit.
std::vector<std::size_t> SplitTokenIndices(std::span<const Token> tokens);

// Deterministic utterance -> coarse dialogue act mapping.
class Parser {
 public:
  explicit Parser(PriceLexicon lexicon) : lexicon_(std::move(lexicon)) {}

  const PriceLexicon& lexicon() const { return lexicon_; }

  CoarseDialogueAct Parse(const DialogueEvent& event, const ParseContext& context) const;
  CoarseDialogueAct ParseMessage(std::string_view text, const ParseContext& context) const;

 private:
  PriceLexicon lexicon_;
};

// Latest propose/counter/offer of a role in the act history.
std::optional<CoarseDialogueAct> LatestProposal(std::span<const DialogueEvent> events,
                                                std::span<const CoarseDialogueAct> acts,
                                                Role role);

// A dialogue with the parser's act for every event.
struct ParsedDialogue {
  std::string id;
  Scenario scenario;
  std::vector<DialogueEvent> events;
  std::vector<CoarseDialogueAct> acts;
};

ParsedDialogue ParseDialogue(std::string id, const Scenario& scenario,
                             std::vector<DialogueEvent> events, const Parser& parser);

}  // namespace haggle

#endif  // HAGGLE_PARSER_H_
