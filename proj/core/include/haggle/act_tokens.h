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

#ifndef HAGGLE_ACT_TOKENS_H_
#define HAGGLE_ACT_TOKENS_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "haggle/pricing.h"
#include "haggle/types.h"

namespace haggle {

// Closed act-token vocabulary. Ids are laid out as
//   <s> </s> <you> <them> | 12 intents | 401 price bins | DN split triples
// where a triple is (item, count 0..10, owner you|them).
using TokenId = int;

namespace act_vocab {

inline constexpr TokenId kBos = 0;
inline constexpr TokenId kEos = 1;
inline constexpr TokenId kYou = 2;
inline constexpr TokenId kThem = 3;
inline constexpr TokenId kFirstIntent = 4;
inline constexpr TokenId kFirstBin = kFirstIntent + kNumIntents;
inline constexpr TokenId kFirstTriple = kFirstBin + PriceBin::kNumBins;
inline constexpr int kMaxTripleCount = 10;
inline constexpr int kNumTriples = kNumItems * (kMaxTripleCount + 1) * 2;
inline constexpr int kSize = kFirstTriple + kNumTriples;

TokenId IntentToken(Intent intent);
TokenId BinToken(PriceBin bin);
TokenId TripleToken(Item item, int count, bool own);

bool IsIntent(TokenId t);
bool IsBin(TokenId t);
bool IsTriple(TokenId t);
// Intents, bins and triples carry content; the rest are delimiters.
bool IsContent(TokenId t);

Intent TokenIntent(TokenId t);
PriceBin TokenBin(TokenId t);
struct Triple {
  Item item;
  int count;
  bool own;
};
Triple TokenTriple(TokenId t);

// "<s>", "greet", "bin:0.60", "hat:2:you".
std::string Name(TokenId t);
TokenId FromName(std::string_view name);

}  // namespace act_vocab

// Serializes an act as [holder, intent, args...]. Prices are binned after
// normalizing from `perspective`; split shares are owned relative to it.
std::vector<TokenId> ActToTokens(const CoarseDialogueAct& act, const Scenario& scenario,
                                 Role perspective, Role speaker);

// Inverse of ActToTokens. Accepts a leading holder token or a bare
// [intent, args...]. Throws HaggleError("unparseable act tokens") on
// malformed input.
CoarseDialogueAct TokensToAct(std::span<const TokenId> tokens, const Scenario& scenario,
                              Role perspective);

}  // namespace haggle

#endif  // HAGGLE_ACT_TOKENS_H_
