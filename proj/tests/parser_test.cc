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

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "haggle/pricing.h"
#include "test_support.h"

namespace haggle {
namespace {

using testing::Dollars;
using testing::Message;
using testing::SmallLexicon;
using testing::TvScenario;

std::vector<double> Detected(std::string_view text, double listing) {
  CBScenario s = TvScenario();
  s.listing_price = Dollars(listing);
  s.buyer_target = Dollars(listing / 2);
  std::vector<double> out;
  for (const auto& p : DetectPrices(Tokenize(text), s, SmallLexicon())) out.push_back(p.price.dollars());
  return out;
}

struct DetectionCase {
  const char* text;
  double listing;
  std::vector<double> expected;
};

TEST(PriceDetectionTest, RuleSuite) {
  // Listing 275 puts the neighbor-rule cap at 412.50.
  const std::vector<DetectionCase> cases = {
      {"$150", 275, {150}},
      {"150$", 275, {150}},
      {"how about 150?", 275, {150}},
      {"how about 150", 275, {150}},
      {"about 150 dollars", 275, {}},
      {"i have 150 ?", 275, {}},
      {"how about 500?", 275, {}},
      {"how about $500?", 275, {500}},
      {"how about 412.5?", 275, {412.5}},
      {"how about 413?", 275, {}},
      {"i can do 200 and deliver", 275, {200}},
      {"it is 10 years old", 275, {}},
      {"take 1,200 .", 1000, {1200}},
      {"take 2k .", 1500, {2000}},
      {"take 2k .", 1000, {}},
      {"offer 180 , final", 275, {180}},
      {"$245 and 150 is fine", 275, {245}},
      {"150", 275, {150}},
      {"for 100 then", 275, {100}},
      {"pay $1,234.56 now", 275, {1234.56}},
  };
  ASSERT_EQ(cases.size(), 20u);
  for (const auto& c : cases) EXPECT_EQ(Detected(c.text, c.listing), c.expected) << c.text;
}

TEST(PriceLexiconTest, CollectsNeighborsOfDollarMarkedNumbers) {
  const std::vector<std::string> utterances = {"How about $200?", "$150 is my offer",
                                               "i said 100 ."};
  const PriceLexicon lex = BuildPriceLexicon(utterances);
  EXPECT_EQ(lex.left_neighbors, (std::set<std::string>{"<bos>", "about"}));
  EXPECT_EQ(lex.right_neighbors, (std::set<std::string>{"?", "is"}));
  EXPECT_EQ(PriceLexicon::FromJson(lex.ToJson()), lex);
}

TEST(ParserTest, TvDialogueParsesToItsActs) {
  const Parser parser(SmallLexicon());
  const ParsedDialogue d = ParseDialogue("tv", TvScenario(), testing::TvDialogue(), parser);
  std::vector<std::string> acts;
  for (const auto& a : d.acts) acts.push_back(a.ToString());
  EXPECT_EQ(acts, (std::vector<std::string>{"greet", "greet", "inquire", "inform", "propose(150)",
                                            "counter(245)", "counter(225)", "agree", "agree",
                                            "offer(225)", "accept"}));
}

class IntentTest : public ::testing::Test {
 protected:
  CoarseDialogueAct ParseAfter(const std::vector<std::pair<Role, std::string>>& history,
                               Role speaker, const std::string& text) {
    events_.clear();
    acts_.clear();
    for (const auto& [role, t] : history) {
      events_.push_back(Message(static_cast<int>(events_.size()), role, t));
      const ParseContext c{scenario_, std::span(events_).first(events_.size() - 1), acts_, role};
      acts_.push_back(parser_.ParseMessage(t, c));
    }
    return parser_.ParseMessage(text, {scenario_, events_, acts_, speaker});
  }

  Scenario scenario_ = TvScenario();
  Parser parser_{SmallLexicon()};
  std::vector<DialogueEvent> events_;
  std::vector<CoarseDialogueAct> acts_;
};

TEST_F(IntentTest, GreetOnlyInFirstTwoEvents) {
  EXPECT_EQ(ParseAfter({}, Role::kBuyer, "hi there").intent, Intent::kGreet);
  EXPECT_EQ(ParseAfter({{Role::kBuyer, "hi"}, {Role::kSeller, "hello"}}, Role::kBuyer, "hi there").intent,
            Intent::kUnknown);
}

TEST_F(IntentTest, GreetWithPriceIsAProposal) {
  const auto act = ParseAfter({}, Role::kBuyer, "hi, would you take $150?");
  EXPECT_EQ(act.intent, Intent::kPropose);
  EXPECT_EQ(act.price, Dollars(150));
}

TEST_F(IntentTest, CounterNeedsADifferentBinThanThePartner) {
  const std::vector<std::pair<Role, std::string>> h = {{Role::kBuyer, "hi"},
                                                       {Role::kSeller, "hello"},
                                                       {Role::kBuyer, "how about $200?"}};
  EXPECT_EQ(ParseAfter(h, Role::kSeller, "no way, $250 is my price").intent, Intent::kCounter);
  // Same bin as the partner's proposal restates it.
  EXPECT_EQ(ParseAfter(h, Role::kSeller, "so $200 then").intent, Intent::kPropose);
}

TEST_F(IntentTest, LastDetectedPriceWins) {
  const auto act = ParseAfter({}, Role::kSeller, "not $150 but $245 .");
  EXPECT_EQ(act.price, Dollars(245));
}

TEST_F(IntentTest, DisagreeBeatsAgree) {
  EXPECT_EQ(ParseAfter({{Role::kBuyer, "hi"}, {Role::kSeller, "hi"}}, Role::kBuyer,
                       "no thanks, that is too much")
                .intent,
            Intent::kDisagree);
}

TEST_F(IntentTest, AgreeKeywords) {
  const std::vector<std::pair<Role, std::string>> h = {{Role::kBuyer, "hi"}, {Role::kSeller, "hi"}};
  for (const char* text : {"deal", "okay then", "sure", "great thanks!", "that works",
                           "sounds good to me"}) {
    EXPECT_EQ(ParseAfter(h, Role::kBuyer, text).intent, Intent::kAgree) << text;
  }
  EXPECT_EQ(ParseAfter(h, Role::kBuyer, "great").intent, Intent::kUnknown);
}

TEST_F(IntentTest, QuestionsAndInform) {
  const std::vector<std::pair<Role, std::string>> h = {{Role::kBuyer, "hi"}, {Role::kSeller, "hi"}};
  EXPECT_EQ(ParseAfter(h, Role::kBuyer, "any scratches?").intent, Intent::kInquire);
  EXPECT_EQ(ParseAfter(h, Role::kBuyer, "is it new").intent, Intent::kInquire);
  auto with_question = h;
  with_question.push_back({Role::kBuyer, "any scratches?"});
  EXPECT_EQ(ParseAfter(with_question, Role::kSeller, "it has a small dent").intent, Intent::kInform);
  EXPECT_EQ(ParseAfter(h, Role::kBuyer, "it has a small dent").intent, Intent::kUnknown);
}

TEST_F(IntentTest, EmptyMessageIsUnknown) {
  EXPECT_EQ(ParseAfter({{Role::kBuyer, "hi"}, {Role::kSeller, "what?"}}, Role::kBuyer, "").intent,
            Intent::kUnknown);
}

TEST(StructuralParseTest, EventsMapDirectly) {
  const Parser parser(SmallLexicon());
  const Scenario s = TvScenario();
  const ParseContext c{s, {}, {}, Role::kSeller};
  EXPECT_EQ(parser.Parse(testing::OfferEvent(0, Role::kSeller, Dollars(225)), c),
            CoarseDialogueAct::WithPrice(Intent::kOffer, Dollars(225)));
  EXPECT_EQ(parser.Parse(testing::Structural(0, Role::kSeller, EventKind::kQuit), c).intent,
            Intent::kQuit);
  // Structural words inside free text never become structural intents.
  EXPECT_EQ(parser.ParseMessage("i accept", c).intent, Intent::kUnknown);
}

TEST(DnSplitTest, PronounsAssignOwners) {
  const DNScenario dn = testing::SimpleDnScenario();
  const Split split = ParseDnSplit(Tokenize("i take the book and 2 hats , you get the balls"), dn,
                                   Role::kAgentA);
  const ItemCounts a = split.Share(0);
  const ItemCounts b = split.Share(1);
  EXPECT_EQ(a, (ItemCounts{1, 2, 0}));
  EXPECT_EQ(b, (ItemCounts{0, 0, 3}));
  EXPECT_TRUE(split.IsComplete(dn.counts) || split.Completed(dn.counts).IsComplete(dn.counts));
}

TEST(DnSplitTest, SpeakerPerspective) {
  const DNScenario dn = testing::SimpleDnScenario();
  const Split split = ParseDnSplit(Tokenize("you can have two hats"), dn, Role::kAgentB);
  EXPECT_EQ(split.allocation[0][1], 2);
  EXPECT_FALSE(split.allocation[1][1].has_value());
}

TEST(DnSplitTest, CountsCapAtAvailable) {
  const DNScenario dn = testing::SimpleDnScenario();
  const Split split = ParseDnSplit(Tokenize("i want 5 balls"), dn, Role::kAgentA);
  EXPECT_EQ(split.allocation[0][2], 3);
}

TEST(DnParseTest, CompletesSplitsAndCounters) {
  const Parser parser(SmallLexicon());
  const Scenario s = testing::SimpleDnScenario();
  std::vector<DialogueEvent> events = {Message(0, Role::kAgentA, "i take the book and the hats")};
  std::vector<CoarseDialogueAct> acts = {
      parser.ParseMessage(events[0].text.value(), {s, {}, {}, Role::kAgentA})};
  ASSERT_EQ(acts[0].intent, Intent::kPropose);
  ASSERT_TRUE(acts[0].split.has_value());
  // Mentioned items are completed for the partner; unmentioned ones stay open.
  EXPECT_EQ(acts[0].split->allocation[1][0], 0);
  EXPECT_EQ(acts[0].split->allocation[1][1], 0);
  EXPECT_FALSE(acts[0].split->allocation[1][2].has_value());
  const auto counter = parser.ParseMessage("you take the book , i take the hats and balls",
                                           {s, events, acts, Role::kAgentB});
  EXPECT_EQ(counter.intent, Intent::kCounter);
  const auto same = parser.ParseMessage("ok so you take the book and the hats",
                                        {s, events, acts, Role::kAgentB});
  EXPECT_EQ(same.intent, Intent::kPropose);
}

}  // namespace
}  // namespace haggle
