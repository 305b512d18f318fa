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

#include "haggle/parser.h"

#include <algorithm>
#include <array>
#include <cmath>

#include "haggle/error.h"
#include "haggle/pricing.h"

namespace haggle {
namespace {


constexpr std::array<std::string_view, 4> kGreetWords = {"hi", "hello", "hey", "greetings"};

const std::vector<std::vector<std::string_view>> kDisagreePhrases = {
    {"no"}, {"nope"}, {"can't"}, {"cannot"}, {"too", "low"}, {"too", "high"}, {"too", "much"},
    {"not", "worth"}};

const std::vector<std::vector<std::string_view>> kAgreePhrases = {
    {"deal"}, {"ok"},           {"okay"},        {"sure"},          {"agreed"},
    {"thanks"}, {"thank", "you"}, {"sounds", "good"}, {"that", "works"}};

constexpr std::array<std::string_view, 16> kQuestionLeads = {
    "what", "why",   "how",   "when",  "where", "is",     "are",    "do",
    "does", "can",   "could", "would", "what's", "how's", "where's", "which"};

constexpr std::array<std::string_view, 11> kFirstPerson = {
    "i", "me", "my", "mine", "i'll", "i'd", "i'm", "i've", "we", "us", "our"};
constexpr std::array<std::string_view, 8> kSecondPerson = {
    "you", "your", "yours", "you'll", "you'd", "you're", "you've", "u"};
constexpr std::array<std::string_view, 10> kCountWords = {
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten"};

template <typename Container>
bool Contains(const Container& c, std::string_view s) {
  return std::find(c.begin(), c.end(), s) != c.end();
}

bool HasPhrase(std::span<const Token> tokens, const std::vector<std::string_view>& phrase) {
  if (phrase.size() > tokens.size()) return false;
  for (std::size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
    bool match = true;
    for (std::size_t k = 0; k < phrase.size(); ++k) {
      if (tokens[i + k].surface != phrase[k]) {
        match = false;
        break;
      }
    }
    if (match) return true;
  }
  return false;
}

bool HasAnyPhrase(std::span<const Token> tokens,
                  const std::vector<std::vector<std::string_view>>& phrases) {
  return std::any_of(phrases.begin(), phrases.end(),
                     [&](const auto& p) { return HasPhrase(tokens, p); });
}

std::optional<Item> ObjectItem(std::string_view word, bool* plural) {
  for (Item item : kAllItems) {
    const std::string_view singular = ItemName(item);
    if (word == singular) {
      *plural = false;
      return item;
    }
    if (word.size() == singular.size() + 1 && word.substr(0, singular.size()) == singular &&
        word.back() == 's') {
      *plural = true;
      return item;
    }
  }
  return std::nullopt;
}

std::optional<int> CountValue(const Token& token) {
  if (token.kind == TokenKind::kNumber && !token.has_dollar) {
    const double v = token.value;
    if (v >= 1 && v <= 10 && v == std::floor(v)) return static_cast<int>(v);
    return std::nullopt;
  }
  for (int k = 0; k < static_cast<int>(kCountWords.size()); ++k) {
    if (token.surface == kCountWords[k]) return k + 1;
  }
  return std::nullopt;
}

enum class SplitRole { kNone, kFirstPerson, kSecondPerson, kCount, kObject };

SplitRole ClassifySplitToken(const Token& token) {
  if (Contains(kFirstPerson, token.surface)) return SplitRole::kFirstPerson;
  if (Contains(kSecondPerson, token.surface)) return SplitRole::kSecondPerson;
  bool plural = false;
  if (ObjectItem(token.surface, &plural)) return SplitRole::kObject;
  if (CountValue(token)) return SplitRole::kCount;
  return SplitRole::kNone;
}

bool SamePriceBin(Role speaker, const CBScenario& scenario, Money a, Money b) {
  return PriceToBin(speaker, scenario, a) == PriceToBin(speaker, scenario, b);
}

}  // namespace

nlohmann::json PriceLexicon::ToJson() const {
  // std::set iterates in sorted order.
  return nlohmann::json{{"left", left_neighbors}, {"right", right_neighbors}};
}

PriceLexicon PriceLexicon::FromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("left") || !j.contains("right")) {
    throw SchemaError("price lexicon needs 'left' and 'right' arrays");
  }
  PriceLexicon lex;
  for (const auto& w : j.at("left")) lex.left_neighbors.insert(w.get<std::string>());
  for (const auto& w : j.at("right")) lex.right_neighbors.insert(w.get<std::string>());
  return lex;
}

PriceLexicon BuildPriceLexicon(std::span<const std::string> utterances) {
  PriceLexicon lex;
  for (const std::string& utterance : utterances) {
    const std::vector<Token> tokens = Tokenize(utterance);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (tokens[i].kind != TokenKind::kNumber || !tokens[i].has_dollar) continue;
      lex.left_neighbors.insert(i == 0 ? std::string(PriceLexicon::kBoundaryLeft)
                                       : tokens[i - 1].surface);
      lex.right_neighbors.insert(i + 1 == tokens.size() ? std::string(PriceLexicon::kBoundaryRight)
                                                        : tokens[i + 1].surface);
    }
  }
  return lex;
}

std::vector<DetectedPrice> DetectPrices(std::span<const Token> tokens, const CBScenario& scenario,
                                        const PriceLexicon& lexicon) {
  std::vector<DetectedPrice> prices;
  const double cap = kNeighborPriceCap * scenario.listing_price.dollars();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (t.kind != TokenKind::kNumber) continue;
    bool is_price = t.has_dollar;
    if (!is_price) {
      const std::string left =
          i == 0 ? std::string(PriceLexicon::kBoundaryLeft) : tokens[i - 1].surface;
      const std::string right = i + 1 == tokens.size() ? std::string(PriceLexicon::kBoundaryRight)
                                                       : tokens[i + 1].surface;
      is_price = lexicon.left_neighbors.contains(left) &&
                 lexicon.right_neighbors.contains(right) && t.value <= cap;
    }
    if (is_price) prices.push_back({i, Money::FromDollars(t.value)});
  }
  return prices;
}

std::optional<CoarseDialogueAct> LatestProposal(std::span<const DialogueEvent> events,
                                                std::span<const CoarseDialogueAct> acts,
                                                Role role) {
  const std::size_t n = std::min(events.size(), acts.size());
  for (std::size_t i = n; i-- > 0;) {
    if (events[i].role != role) continue;
    const CoarseDialogueAct& act = acts[i];
    if (TakesArgument(act.intent) && (act.price || act.split)) return act;
  }
  return std::nullopt;
}

Intent ClassifyIntent(std::span<const Token> tokens, const std::optional<Money>& price,
                      const std::optional<Split>& split, const ParseContext& context) {
  const bool has_argument = price.has_value() || (split.has_value() && !split->Empty());

  // 1 greet
  if (context.prior_events.size() < 2 && !has_argument) {
    for (const Token& t : tokens) {
      if (Contains(kGreetWords, t.surface)) return Intent::kGreet;
    }
  }
  if (has_argument) {
    // 2 counter / 3 propose
    const auto partner = LatestProposal(context.prior_events, context.prior_acts,
                                        Partner(context.speaker));
    if (partner) {
      if (price && partner->price) {
        const auto& cb = std::get<CBScenario>(context.scenario);
        if (!SamePriceBin(context.speaker, cb, *price, *partner->price)) return Intent::kCounter;
      } else if (split && partner->split) {
        const auto& dn = std::get<DNScenario>(context.scenario);
        if (split->Completed(dn.counts) != partner->split->Completed(dn.counts)) {
          return Intent::kCounter;
        }
      }
    }
    return Intent::kPropose;
  }
  // 4 disagree
  if (HasAnyPhrase(tokens, kDisagreePhrases)) return Intent::kDisagree;
  // 5 agree
  if (HasAnyPhrase(tokens, kAgreePhrases)) return Intent::kAgree;
  // 6 inquire
  const bool question = std::any_of(tokens.begin(), tokens.end(),
                                    [](const Token& t) { return t.surface == "?"; });
  if (question || (!tokens.empty() && Contains(kQuestionLeads, tokens.front().surface))) {
    return Intent::kInquire;
  }
  // 7 inform
  if (!tokens.empty()) {
    const auto& events = context.prior_events;
    const auto& acts = context.prior_acts;
    for (std::size_t i = std::min(events.size(), acts.size()); i-- > 0;) {
      if (events[i].role == context.speaker) continue;
      if (acts[i].intent == Intent::kInquire) return Intent::kInform;
      break;
    }
  }
  return Intent::kUnknown;
}

Split ParseDnSplit(std::span<const Token> tokens, const DNScenario& scenario, Role speaker) {
  Split split;
  int agent = Slot(speaker);
  int pending_count = -1;
  for (const Token& t : tokens) {
    switch (ClassifySplitToken(t)) {
      case SplitRole::kFirstPerson:
        agent = Slot(speaker);
        pending_count = -1;
        break;
      case SplitRole::kSecondPerson:
        agent = 1 - Slot(speaker);
        pending_count = -1;
        break;
      case SplitRole::kCount:
        pending_count = CountValue(t).value_or(-1);
        break;
      case SplitRole::kObject: {
        bool plural = false;
        const Item item = *ObjectItem(t.surface, &plural);
        const int full = scenario.counts[static_cast<int>(item)];
        int count = plural ? full : 1;
        if (pending_count >= 0) count = pending_count;
        count = std::min(count, full);
        split.allocation[agent][static_cast<int>(item)] = count;
        pending_count = -1;
        break;
      }
      case SplitRole::kNone:
        break;
    }
  }
  return split;
}

std::vector<std::size_t> SplitTokenIndices(std::span<const Token> tokens) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (ClassifySplitToken(tokens[i]) != SplitRole::kNone) out.push_back(i);
  }
  return out;
}

CoarseDialogueAct Parser::Parse(const DialogueEvent& event, const ParseContext& context) const {
  switch (event.kind) {
    case EventKind::kOffer: {
      CoarseDialogueAct act{Intent::kOffer, event.price, event.split};
      if (act.split) act.split = act.split->Completed(std::get<DNScenario>(context.scenario).counts);
      return act;
    }
    case EventKind::kAccept: return CoarseDialogueAct::Of(Intent::kAccept);
    case EventKind::kReject: return CoarseDialogueAct::Of(Intent::kReject);
    case EventKind::kQuit: return CoarseDialogueAct::Of(Intent::kQuit);
    case EventKind::kMessage: break;
  }
  return ParseMessage(event.text.value_or(""), context);
}

CoarseDialogueAct Parser::ParseMessage(std::string_view text, const ParseContext& context) const {
  const std::vector<Token> tokens = Tokenize(text);
  std::optional<Money> price;
  std::optional<Split> split;
  if (const auto* cb = std::get_if<CBScenario>(&context.scenario)) {
    const auto prices = DetectPrices(tokens, *cb, lexicon_);
    if (!prices.empty()) price = prices.back().price;
  } else {
    const auto& dn = std::get<DNScenario>(context.scenario);
    Split parsed = ParseDnSplit(tokens, dn, context.speaker);
    if (!parsed.Empty()) split = parsed.Completed(dn.counts);
  }
  const Intent intent = ClassifyIntent(tokens, price, split, context);
  if (TakesArgument(intent)) return {intent, price, split};
  return CoarseDialogueAct::Of(intent);
}

ParsedDialogue ParseDialogue(std::string id, const Scenario& scenario,
                             std::vector<DialogueEvent> events, const Parser& parser) {
  ParsedDialogue out{std::move(id), scenario, std::move(events), {}};
  out.acts.reserve(out.events.size());
  for (std::size_t i = 0; i < out.events.size(); ++i) {
    const ParseContext context{out.scenario, std::span(out.events).first(i), out.acts,
                               out.events[i].role};
    out.acts.push_back(parser.Parse(out.events[i], context));
  }
  return out;
}

}  // namespace haggle
