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

#ifndef HAGGLE_TESTS_TEST_SUPPORT_H_
#define HAGGLE_TESTS_TEST_SUPPORT_H_

#include <optional>
#include <string>
#include <vector>

#include "haggle/money.h"
#include "haggle/parser.h"
#include "haggle/rng.h"
#include "haggle/types.h"

namespace haggle::testing {

inline Money Dollars(double d) { return Money::FromDollars(d); }

inline DialogueEvent Message(int turn, Role role, std::string text) {
  return {turn, role, EventKind::kMessage, std::move(text), std::nullopt, std::nullopt};
}

inline DialogueEvent OfferEvent(int turn, Role role, Money price) {
  return {turn, role, EventKind::kOffer, std::nullopt, price, std::nullopt};
}

inline DialogueEvent SplitOfferEvent(int turn, Role role, Split split) {
  return {turn, role, EventKind::kOffer, std::nullopt, std::nullopt, std::move(split)};
}

inline DialogueEvent Structural(int turn, Role role, EventKind kind) {
  return {turn, role, kind, std::nullopt, std::nullopt, std::nullopt};
}

// The used-TV posting: listing $275, buyer target $192.
inline CBScenario TvScenario() {
  return {"electronics", "JVC HD-ILA 1080P 70 Inch TV",
          "Tv is approximately 10 years old. Just installed new lamp.", Dollars(275), Dollars(192)};
}

inline std::vector<DialogueEvent> TvDialogue() {
  const Role b = Role::kBuyer;
  const Role s = Role::kSeller;
  return {
      Message(0, b, "Hello do you still have the TV?"),
      Message(1, s, "Hello, yes the TV is still available"),
      Message(2, b, "What condition is it in? Any scratches or problems? I see it recently got repaired"),
      Message(3, s,
              "It is in great condition and works like a champ! I just installed a new lamp in it. "
              "There aren't any scratches or problems."),
      Message(4, b,
              "All right. Well I think 275 is a little high for a 10 year old TV. Can you lower the "
              "price some? How about 150?"),
      Message(5, s,
              "I am willing to lower the price, but $150 is a little too low. How about $245 and if "
              "you are not too far from me, I will deliver it to you for free?"),
      Message(6, b,
              "It's still 10 years old and the technology is much older. Will you do 225 and you "
              "deliver it. How's that sound?"),
      Message(7, s, "Okay, that sounds like a deal!"),
      Message(8, b, "Great thanks!"),
      OfferEvent(9, s, Dollars(225)),
      Structural(10, b, EventKind::kAccept),
  };
}

inline PriceLexicon SmallLexicon() {
  PriceLexicon lex;
  lex.left_neighbors = {"<bos>", "about", "do", "offer", "take", "to", "at", "for", "pay"};
  lex.right_neighbors = {"<eos>", ".", "?", "!", ",", "and", "for", "is", "then"};
  return lex;
}

// Listing in [$20, $2000], target in [0.5, 0.95] of it.
inline CBScenario RandomCbScenario(Rng& rng) {
  const std::int64_t listing = 2000 + rng.UniformInt(198001);
  const double fraction = 0.5 + 0.45 * rng.Uniform();
  const auto target = static_cast<std::int64_t>(static_cast<double>(listing) * fraction);
  return {"bike", "Road bike", "Lightly used.", Money::FromCents(listing), Money::FromCents(target)};
}

inline DNScenario SimpleDnScenario() {
  // counts 1 book, 2 hats, 3 balls; A values 4,3,0 (4+6+0 = 10), B 0,2,2 (0+4+6 = 10).
  DNScenario dn;
  dn.counts = {1, 2, 3};
  dn.values[0] = {4, 3, 0};
  dn.values[1] = {0, 2, 2};
  return dn;
}

}  // namespace haggle::testing

#endif  // HAGGLE_TESTS_TEST_SUPPORT_H_
