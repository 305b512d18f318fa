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

#include "haggle/act_tokens.h"

#include <functional>
#include <map>
#include <string>

#include "haggle/error.h"

namespace haggle {
namespace act_vocab {
namespace {

constexpr int kTriplesPerItem = (kMaxTripleCount + 1) * 2;

void CheckId(TokenId t) {
  if (t < 0 || t >= kSize) throw HaggleError("act token id out of range");
}

}  // namespace

TokenId IntentToken(Intent intent) { return kFirstIntent + static_cast<int>(intent); }

TokenId BinToken(PriceBin bin) { return kFirstBin + bin.index(); }

TokenId TripleToken(Item item, int count, bool own) {
  if (count < 0 || count > kMaxTripleCount) throw HaggleError("split count out of range");
  return kFirstTriple + static_cast<int>(item) * kTriplesPerItem + count * 2 + (own ? 0 : 1);
}

bool IsIntent(TokenId t) { return t >= kFirstIntent && t < kFirstBin; }
bool IsBin(TokenId t) { return t >= kFirstBin && t < kFirstTriple; }
bool IsTriple(TokenId t) { return t >= kFirstTriple && t < kSize; }
bool IsContent(TokenId t) { return IsIntent(t) || IsBin(t) || IsTriple(t); }

Intent TokenIntent(TokenId t) {
  if (!IsIntent(t)) throw HaggleError("not an intent token");
  return static_cast<Intent>(t - kFirstIntent);
}

PriceBin TokenBin(TokenId t) {
  if (!IsBin(t)) throw HaggleError("not a price-bin token");
  return PriceBin::FromIndex(t - kFirstBin);
}

Triple TokenTriple(TokenId t) {
  if (!IsTriple(t)) throw HaggleError("not a split token");
  const int offset = t - kFirstTriple;
  return {kAllItems[offset / kTriplesPerItem], (offset % kTriplesPerItem) / 2, offset % 2 == 0};
}

std::string Name(TokenId t) {
  CheckId(t);
  switch (t) {
    case kBos: return "<s>";
    case kEos: return "</s>";
    case kYou: return "<you>";
    case kThem: return "<them>";
    default: break;
  }
  if (IsIntent(t)) return std::string(IntentName(TokenIntent(t)));
  if (IsBin(t)) return "bin:" + TokenBin(t).ToString();
  const Triple tr = TokenTriple(t);
  return std::string(ItemName(tr.item)) + ":" + std::to_string(tr.count) + ":" +
         (tr.own ? "you" : "them");
}

TokenId FromName(std::string_view name) {
  static const std::map<std::string, TokenId, std::less<>> kByName = [] {
    std::map<std::string, TokenId, std::less<>> m;
    for (TokenId t = 0; t < kSize; ++t) m.emplace(Name(t), t);
    return m;
  }();
  const auto it = kByName.find(name);
  if (it == kByName.end()) throw HaggleError("unknown act token '" + std::string(name) + "'");
  return it->second;
}

}  // namespace act_vocab

std::vector<TokenId> ActToTokens(const CoarseDialogueAct& act, const Scenario& scenario,
                                 Role perspective, Role speaker) {
  using namespace act_vocab;
  ValidateAct(act, TaskOf(scenario));
  std::vector<TokenId> tokens = {speaker == perspective ? kYou : kThem, IntentToken(act.intent)};
  if (act.price) {
    tokens.push_back(BinToken(PriceToBin(perspective, std::get<CBScenario>(scenario), *act.price)));
  } else if (act.split) {
    const int own = Slot(perspective);
    for (int i = 0; i < kNumItems; ++i) {
      if (const auto& v = act.split->allocation[own][i]) {
        tokens.push_back(TripleToken(kAllItems[i], *v, true));
      } else if (const auto& w = act.split->allocation[1 - own][i]) {
        tokens.push_back(TripleToken(kAllItems[i], *w, false));
      }
    }
    if (tokens.size() == 2) throw HaggleError("split act without any share");
  }
  return tokens;
}

CoarseDialogueAct TokensToAct(std::span<const TokenId> tokens, const Scenario& scenario,
                              Role perspective) {
  using namespace act_vocab;
  const auto fail = [] { return HaggleError("unparseable act tokens"); };
  std::size_t i = 0;
  if (i < tokens.size() && (tokens[i] == kYou || tokens[i] == kThem)) ++i;
  if (i >= tokens.size() || !IsIntent(tokens[i])) throw fail();
  const Intent intent = TokenIntent(tokens[i++]);
  std::size_t end = tokens.size();
  if (end > i && tokens[end - 1] == kEos) --end;

  CoarseDialogueAct act = CoarseDialogueAct::Of(intent);
  if (!TakesArgument(intent)) {
    if (i != end) throw fail();
    return act;
  }
  if (const auto* cb = std::get_if<CBScenario>(&scenario)) {
    if (end - i != 1 || !IsBin(tokens[i])) throw fail();
    act.price = DenormalizePrice(perspective, *cb, TokenBin(tokens[i]));
    return act;
  }
  const auto& dn = std::get<DNScenario>(scenario);
  if (i == end) throw fail();
  Split split;
  const int own = Slot(perspective);
  int last_item = -1;
  for (; i < end; ++i) {
    if (!IsTriple(tokens[i])) throw fail();
    const Triple tr = TokenTriple(tokens[i]);
    const int item = static_cast<int>(tr.item);
    if (item <= last_item || tr.count > dn.counts[item]) throw fail();
    last_item = item;
    split.allocation[tr.own ? own : 1 - own][item] = tr.count;
  }
  act.split = split.Completed(dn.counts);
  return act;
}

}  // namespace haggle
