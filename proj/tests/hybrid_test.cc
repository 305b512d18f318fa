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

#include "haggle/hybrid.h"

#include <gtest/gtest.h>

#include <cmath>

#include "haggle/error.h"
#include "haggle/policy.h"
#include "haggle/pricing.h"
#include "test_support.h"

namespace haggle {
namespace {

using testing::Dollars;
using testing::Message;
using testing::OfferEvent;
using testing::SplitOfferEvent;
using testing::TvScenario;

constexpr Role kB = Role::kBuyer;
constexpr Role kS = Role::kSeller;

void Say(DialogueState& state, Role role, CoarseDialogueAct act) {
  state.Append(Message(static_cast<int>(state.num_events()), role, "x"), std::move(act));
}

void Offer(DialogueState& state, Role role, Money price) {
  state.Append(OfferEvent(static_cast<int>(state.num_events()), role, price),
               CoarseDialogueAct::WithPrice(Intent::kOffer, price));
}

CoarseDialogueAct Proposal(Money price) {
  return CoarseDialogueAct::WithPrice(Intent::kPropose, price);
}

HybridConfig Immediate() {
  HybridConfig config;
  config.offer_deadline = 0;
  return config;
}

TEST(HybridCbTest, AcceptsExactlyWithinBottomline) {
  // Seller bottomline is 0.7 * 275 = 192.50.
  Rng rng(1);
  for (const auto& [price, accept] :
       std::vector<std::pair<double, bool>>{{150, false}, {192.49, false}, {192.5, true}, {225, true}}) {
    DialogueState state(TvScenario());
    Offer(state, kB, Dollars(price));
    const auto act = HybridNextActCB(state, kS, IntentLM(), HybridConfig(), rng);
    EXPECT_EQ(act.intent, accept ? Intent::kAccept : Intent::kReject) << price;
  }
  // The buyer's bottomline is the listing price.
  for (const auto& [price, accept] : std::vector<std::pair<double, bool>>{{275, true}, {275.01, false}}) {
    DialogueState state(TvScenario());
    Offer(state, kS, Dollars(price));
    EXPECT_EQ(HybridNextActCB(state, kB, IntentLM(), HybridConfig(), rng).intent,
              accept ? Intent::kAccept : Intent::kReject);
  }
}

TEST(HybridCbTest, CounterIsMidpointClampedToBottomline) {
  Rng rng(2);
  {
    DialogueState state(TvScenario());
    Say(state, kS, Proposal(Dollars(275)));
    Say(state, kB, Proposal(Dollars(100)));
    // Midpoint 187.50 lies below the seller bottomline.
    const auto act = HybridNextActCB(state, kS, IntentLM(), Immediate(), rng);
    EXPECT_EQ(act.intent, Intent::kCounter);
    EXPECT_EQ(act.price, Dollars(192.5));
  }
  {
    DialogueState state(TvScenario());
    Say(state, kS, Proposal(Dollars(300)));
    const auto act = HybridNextActCB(state, kB, IntentLM(), Immediate(), rng);
    EXPECT_EQ(act.price, Dollars(246));  // (192 + 300) / 2
  }
  {
    DialogueState state(TvScenario());
    Say(state, kS, Proposal(Dollars(400)));
    EXPECT_EQ(HybridNextActCB(state, kB, IntentLM(), Immediate(), rng).price, Dollars(275));
  }
  {
    DialogueState state(TvScenario());
    Say(state, kS, Proposal(Dollars(275)));
    Say(state, kB, Proposal(Dollars(100)));
    Say(state, kS, CoarseDialogueAct::WithPrice(Intent::kCounter, Dollars(250)));
    Say(state, kB, CoarseDialogueAct::WithPrice(Intent::kCounter, Dollars(150)));
    // Counters continue from the own latest price.
    EXPECT_EQ(HybridNextActCB(state, kS, IntentLM(), Immediate(), rng).price, Dollars(200));
  }
}

TEST(HybridCbTest, SplitsTheDifferenceFromOwnStance) {
  Rng rng(6);
  DialogueState state(TvScenario());
  Say(state, kS, Proposal(Dollars(245)));
  Say(state, kB, Proposal(Dollars(150)));
  const auto act = HybridNextActCB(state, kS, IntentLM(), Immediate(), rng);
  EXPECT_EQ(act.intent, Intent::kCounter);
  EXPECT_EQ(act.price, Dollars(197.5));
}

TEST(HybridCbTest, OffersPartnerPriceOnceAcceptable) {
  Rng rng(3);
  DialogueState state(TvScenario());
  Say(state, kS, Proposal(Dollars(275)));
  Say(state, kB, Proposal(Dollars(240)));
  const auto act = HybridNextActCB(state, kS, IntentLM(), Immediate(), rng);
  EXPECT_EQ(act.intent, Intent::kOffer);
  EXPECT_EQ(act.price, Dollars(240));

  DialogueState agreed(TvScenario());
  Say(agreed, kB, Proposal(Dollars(230)));
  Say(agreed, kS, CoarseDialogueAct::Of(Intent::kInform));
  Say(agreed, kB, CoarseDialogueAct::Of(Intent::kAgree));
  EXPECT_EQ(HybridNextActCB(agreed, kS, IntentLM(), HybridConfig(), rng).intent, Intent::kOffer);
}

TEST(HybridCbTest, NeverQuitsAndStaysContextValid) {
  const std::vector<std::vector<Intent>> seqs = {{Intent::kGreet, Intent::kQuit, Intent::kQuit}};
  const IntentLM lm = IntentLM::Fit(seqs);
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    DialogueState state(TvScenario());
    Say(state, kB, CoarseDialogueAct::Of(Intent::kGreet));
    const auto act = HybridNextActCB(state, kS, lm, HybridConfig(), rng);
    EXPECT_NE(act.intent, Intent::kQuit);
    const auto allowed = ContextValidIntents(state, kS);
    EXPECT_NE(std::find(allowed.begin(), allowed.end(), act.intent), allowed.end());
  }
}

TEST(IntentLMTest, ConditionalsNormalizeAndSmooth) {
  const std::vector<std::vector<Intent>> seqs = {{Intent::kGreet, Intent::kInquire, Intent::kInform},
                                                 {Intent::kGreet, Intent::kPropose}};
  const IntentLM lm = IntentLM::Fit(seqs, 0.5);
  for (const auto& ctx : std::vector<std::pair<std::optional<Intent>, std::optional<Intent>>>{
           {std::nullopt, std::nullopt}, {std::nullopt, Intent::kGreet}, {Intent::kAgree, Intent::kAgree}}) {
    double total = 0;
    for (int i = 0; i < kNumIntents; ++i) total += lm.Prob(static_cast<Intent>(i), ctx.first, ctx.second);
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
  EXPECT_NEAR(lm.Prob(Intent::kGreet, std::nullopt, std::nullopt), 2.5 / (2 + 0.5 * kNumIntents), 1e-12);
  EXPECT_NEAR(lm.Prob(Intent::kInquire, std::nullopt, Intent::kGreet), 1.5 / (2 + 0.5 * kNumIntents),
              1e-12);
  EXPECT_EQ(IntentLM::FromJson(lm.ToJson()), lm);
  EXPECT_THROW(IntentLM::Fit(seqs, 0), HaggleError);
  Rng rng(5);
  EXPECT_THROW(lm.Sample(rng, std::nullopt, std::nullopt, {}), HaggleError);
  const std::vector<Intent> only = {Intent::kAgree};
  EXPECT_EQ(lm.Sample(rng, std::nullopt, std::nullopt, only), Intent::kAgree);
}

// Independent concession oracle.
std::optional<ItemCounts> OracleConcede(const ItemCounts& own, const DNScenario& dn, int slot,
                                        const PartnerEstimate& est) {
  std::optional<int> give;
  double best = 0;
  for (int i = 0; i < kNumItems; ++i) {
    if (own[i] == 0) continue;
    const double loss = dn.values[slot][i] - est[i];
    if (!give || loss < best) {
      give = i;
      best = loss;
    }
  }
  if (!give) return std::nullopt;
  ItemCounts out = own;
  out[*give] -= 1;
  for (int i = 0; i < kNumItems; ++i) {
    if (i == *give || est[i] != 0.0 || out[i] == dn.counts[i]) continue;
    out[i] += 1;
    break;
  }
  return out;
}

TEST(HybridDnTest, ConcessionIsArgminOfValueMinusEstimate) {
  const DNScenario dn = testing::SimpleDnScenario();
  const std::vector<std::pair<ItemCounts, PartnerEstimate>> cases = {
      {{1, 2, 3}, {10.0 / 3, 10.0 / 3, 10.0 / 3}},
      {{1, 2, 3}, {0, 5, 5}},
      {{1, 2, 0}, {0, 5, 5}},
      {{1, 0, 0}, {0, 5, 5}},
      {{0, 2, 3}, {2, 2, 2}},
      {{1, 1, 1}, {9, 0.5, 0.5}},
      {{0, 0, 3}, {3, 3, 4}},
      {{1, 2, 3}, {4, 3, 0}},
      {{0, 1, 0}, {0, 0, 10}},
      {{0, 0, 0}, {3, 3, 4}},
  };
  for (const int slot : {0, 1}) {
    const Role self = slot == 0 ? Role::kAgentA : Role::kAgentB;
    for (const auto& [own, est] : cases) {
      EXPECT_EQ(ConcedeOneUnit(own, dn, self, est), OracleConcede(own, dn, slot, est));
    }
  }
  EXPECT_EQ(ConcedeOneUnit({1, 2, 3}, dn, Role::kAgentA, {10.0 / 3, 10.0 / 3, 10.0 / 3}),
            (ItemCounts{1, 2, 2}));
}

TEST(HybridDnTest, WorkedConcessionExamples) {
  DNScenario dn;
  dn.counts = {1, 2, 1};
  dn.values[0] = {6, 1, 2};
  dn.values[1] = {2, 3, 2};
  // own - est = (4, -2, 0): give up a hat, no zero-estimate item to claim.
  EXPECT_EQ(ConcedeOneUnit({1, 2, 1}, dn, Role::kAgentA, {2, 3, 2}), (ItemCounts{1, 1, 1}));
  // A zero estimate for the ball adds one ball to the own share.
  EXPECT_EQ(ConcedeOneUnit({1, 2, 0}, dn, Role::kAgentA, {5, 5, 0}), (ItemCounts{1, 1, 1}));
  EXPECT_EQ(ConcedeOneUnit({0, 0, 0}, dn, Role::kAgentA, {2, 3, 2}), std::nullopt);
}

TEST(HybridDnTest, AgreesWhenProposalMeetsTarget) {
  DNScenario dn;
  dn.counts = {1, 2, 1};
  dn.values[0] = {6, 1, 2};
  dn.values[1] = {2, 3, 2};
  HybridConfig config;
  config.dn_target = 7;
  DialogueState state(dn);
  state.Append(Message(0, Role::kAgentA, "x"),
               CoarseDialogueAct::WithSplit(Intent::kPropose, Split::FromShare(0, {1, 2, 1}, dn.counts)));
  // Worth 6 + 2 = 8 to agent A.
  const Split offer = Split::FromShare(0, {1, 0, 1}, dn.counts);
  state.Append(Message(1, Role::kAgentB, "x"), CoarseDialogueAct::WithSplit(Intent::kCounter, offer));
  EXPECT_EQ(HybridNextActDN(state, Role::kAgentA, config).intent, Intent::kAgree);
  config.dn_target = 9;
  EXPECT_NE(HybridNextActDN(state, Role::kAgentA, config).intent, Intent::kAgree);
}

TEST(HybridDnTest, EstimateTracksRequestedItems) {
  const DNScenario dn = testing::SimpleDnScenario();
  const PartnerEstimate uniform = UniformPartnerEstimate(dn);
  const Split split = Split::FromShare(1, {0, 0, 3}, dn.counts);
  const PartnerEstimate est =
      UpdatePartnerEstimate(uniform, dn, CoarseDialogueAct::WithSplit(Intent::kPropose, split),
                            Role::kAgentB);
  double total = 0;
  for (const double v : est) total += v;
  EXPECT_NEAR(total, kDNValueTotal, 1e-12);
  EXPECT_GT(est[2], est[0]);
  EXPECT_EQ(UpdatePartnerEstimate(uniform, dn, CoarseDialogueAct::Of(Intent::kGreet), Role::kAgentB),
            uniform);
}

TEST(HybridDnTest, OpensWithValuedItemsAndJudgesOffers) {
  const DNScenario dn = testing::SimpleDnScenario();
  HybridConfig config;
  DialogueState state(dn);
  const auto open = HybridNextActDN(state, Role::kAgentA, config);
  EXPECT_EQ(open.intent, Intent::kPropose);
  EXPECT_EQ(open.split->Share(0), (ItemCounts{1, 2, 0}));

  // 4 + 3 = 7 meets the target of 6.
  DialogueState good(dn);
  const Split generous = Split::FromShare(0, {1, 1, 0}, dn.counts);
  good.Append(SplitOfferEvent(0, Role::kAgentB, generous), CoarseDialogueAct::WithSplit(Intent::kOffer, generous));
  EXPECT_EQ(HybridNextActDN(good, Role::kAgentA, config).intent, Intent::kAccept);

  DialogueState bad(dn);
  const Split stingy = Split::FromShare(0, {0, 1, 3}, dn.counts);
  bad.Append(SplitOfferEvent(0, Role::kAgentB, stingy), CoarseDialogueAct::WithSplit(Intent::kOffer, stingy));
  EXPECT_EQ(HybridNextActDN(bad, Role::kAgentA, config).intent, Intent::kReject);
}

}  // namespace
}  // namespace haggle
