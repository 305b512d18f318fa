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

#include "haggle/generator.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <boost/math/distributions/chi_squared.hpp>

#include "haggle/corpus.h"
#include "haggle/error.h"
#include "haggle/policy.h"
#include "test_support.h"

namespace haggle {
namespace {

using testing::Dollars;
using testing::SmallLexicon;
using testing::TvScenario;

TEST(TemplateTest, CbPriceBecomesPlaceholder) {
  const Template t = ExtractTemplate("How about $245 and I deliver?",
                                     CoarseDialogueAct::WithPrice(Intent::kCounter, Dollars(245)),
                                     TvScenario(), SmallLexicon(), "d:1");
  EXPECT_EQ(t.Text(), "How about [price] and I deliver ?");
  EXPECT_TRUE(t.lexicalizable);
  EXPECT_EQ(t.NumPlaceholders(), 1);
  EXPECT_EQ(t.source_id, "d:1");
  EXPECT_EQ(t.Terms().front(), "how");
}

TEST(TemplateTest, OnlyTheActPriceIsReplaced) {
  const Template t = ExtractTemplate("$150 is too low, $245 works",
                                     CoarseDialogueAct::WithPrice(Intent::kCounter, Dollars(245)),
                                     TvScenario(), SmallLexicon());
  EXPECT_EQ(t.Text(), "$150 is too low , [price] works");
  const Template missing = ExtractTemplate("$150 is too low",
                                           CoarseDialogueAct::WithPrice(Intent::kCounter, Dollars(245)),
                                           TvScenario(), SmallLexicon());
  EXPECT_FALSE(missing.lexicalizable);
  EXPECT_EQ(missing.NumPlaceholders(), 0);
}

TEST(TemplateTest, DnSplitSpanCollapses) {
  Split split;
  split.allocation[0][0] = 1;
  const Template t = ExtractTemplate("ok i take the book and 2 hats , you get the balls .",
                                     CoarseDialogueAct::WithSplit(Intent::kPropose, split),
                                     testing::SimpleDnScenario(), SmallLexicon());
  EXPECT_EQ(t.Text(), "ok [split] .");
}

TEST(LexicalizeTest, FillsAndChecksPlaceholders) {
  Template t;
  t.tokens = {"how", "about", "[price]", "?"};
  EXPECT_EQ(Lexicalize(t, CoarseDialogueAct::WithPrice(Intent::kPropose, Dollars(197.5)), TvScenario(),
                       Role::kBuyer),
            "how about $197.50 ?");
  EXPECT_THROW(Lexicalize(t, CoarseDialogueAct::Of(Intent::kAgree), TvScenario(), Role::kBuyer),
               HaggleError);
  Template plain;
  plain.tokens = {"deal"};
  EXPECT_THROW(Lexicalize(plain, CoarseDialogueAct::WithPrice(Intent::kPropose, Dollars(1)),
                          TvScenario(), Role::kBuyer),
               HaggleError);
}

TEST(SplitPhraseTest, SpeakerSideFirstNonZeroOnly) {
  const DNScenario dn = testing::SimpleDnScenario();
  const Split split = Split::FromShare(0, {1, 2, 0}, dn.counts);
  EXPECT_EQ(SplitPhrase(split, dn, Role::kAgentA), "i take 1 book and 2 hats , you take 3 balls");
  EXPECT_EQ(SplitPhrase(split, dn, Role::kAgentB), "i take 3 balls , you take 1 book and 2 hats");
}

TEST(TrigramLMTest, ConditionalsSumToOne) {
  const std::vector<std::vector<std::string>> sentences = {
      {"how", "about", "[price]", "?"}, {"how", "is", "it", "?"}, {"deal"}, {"no", "deal"}};
  const TrigramLM lm = TrigramLM::Fit(sentences, 0.1);
  EXPECT_EQ(lm.vocab_size(), 3u + 8u);
  std::vector<std::string> histories = lm.vocab();
  histories.push_back("never-seen");
  for (const auto& u : histories) {
    for (const auto& v : histories) {
      double total = 0;
      for (const auto& w : lm.vocab()) total += std::exp(lm.LogProb(u, v, w));
      ASSERT_NEAR(total, 1.0, 1e-6) << u << " " << v;
    }
  }
  // (1 + 0.1) / (2 + 0.1 * 11): "how" follows <s> <s> in two of four sentences... of 4 starts.
  EXPECT_NEAR(std::exp(lm.LogProb("<s>", "<s>", "how")), 2.1 / (4 + 1.1), 1e-12);
  EXPECT_NEAR(lm.Score(std::vector<std::string>{"deal"}, false),
              lm.LogProb("<s>", "<s>", "deal") + lm.LogProb("<s>", "deal", "</s>"), 1e-12);
  EXPECT_THROW(TrigramLM::Fit(sentences, 0.0), HaggleError);
}

class IndexTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    corpus_ = new std::vector<DialogueRecord>(SynthCorpus(Task::kCraigslist, 60, 21));
    lexicon_ = new PriceLexicon(BuildPriceLexicon(Utterances(*corpus_)));
    parsed_ = new std::vector<ParsedDialogue>(ParseCorpus(*corpus_, Parser(*lexicon_)));
    index_ = new RetrievalIndex(BuildIndex(*parsed_, *lexicon_, 0.1));
  }
  static void TearDownTestSuite() {
    delete index_;
    delete parsed_;
    delete lexicon_;
    delete corpus_;
  }

  static std::vector<DialogueRecord>* corpus_;
  static PriceLexicon* lexicon_;
  static std::vector<ParsedDialogue>* parsed_;
  static RetrievalIndex* index_;
};

std::vector<DialogueRecord>* IndexTest::corpus_ = nullptr;
PriceLexicon* IndexTest::lexicon_ = nullptr;
std::vector<ParsedDialogue>* IndexTest::parsed_ = nullptr;
RetrievalIndex* IndexTest::index_ = nullptr;

TEST_F(IndexTest, RankingEqualsBruteForceTfIdf) {
  const auto& cands = index_->candidates();
  ASSERT_GT(cands.size(), 100u);
  ASSERT_LE(cands.size(), 1000u);
  // Oracle idf from raw document frequencies.
  std::map<std::string, int> df;
  for (const auto& c : cands) {
    const auto terms = c.context_template.Terms();
    for (const auto& t : std::set<std::string>(terms.begin(), terms.end())) ++df[t];
  }
  const auto tfidf = [&](const Template& t) {
    std::map<std::string, double> v;
    for (const auto& term : t.Terms()) {
      if (df.contains(term)) v[term] += std::log(static_cast<double>(cands.size()) / df[term]);
    }
    return v;
  };
  Rng rng(4);
  for (int q = 0; q < 200; ++q) {
    const Candidate& probe = cands[static_cast<std::size_t>(rng.UniformInt(static_cast<int>(cands.size())))];
    const Intent want = probe.response_act.intent;
    const Intent ctx = cands[static_cast<std::size_t>(rng.UniformInt(static_cast<int>(cands.size())))]
                           .context_act.intent;
    const auto query = tfidf(probe.context_template);
    std::vector<std::pair<double, std::size_t>> expected;
    for (int pass = 0; pass < 2 && expected.empty(); ++pass) {
      for (std::size_t i = 0; i < cands.size(); ++i) {
        const auto& c = cands[i];
        if (c.response_act.intent != want) continue;
        if (TakesArgument(want) && !c.response_template.lexicalizable) continue;
        if (pass == 0 && c.context_act.intent != ctx) continue;
        double dot = 0;
        for (const auto& [term, w] : tfidf(c.context_template)) {
          if (const auto it = query.find(term); it != query.end()) dot += w * it->second;
        }
        expected.push_back({dot, i});
      }
    }
    std::stable_sort(expected.begin(), expected.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    const auto ranked = index_->Retrieve(want, ctx, probe.context_template);
    ASSERT_EQ(ranked.size(), expected.size());
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      ASSERT_NEAR(ranked[i].similarity, expected[i].first, 1e-9);
      // Ties may only reorder candidates of equal similarity.
      if (ranked[i].index != expected[i].second) {
        ASSERT_NEAR(ranked[i].similarity, expected[i].first, 1e-9);
      }
    }
    for (std::size_t i = 1; i < ranked.size(); ++i) {
      ASSERT_GE(ranked[i - 1].similarity, ranked[i].similarity);
      if (ranked[i - 1].similarity == ranked[i].similarity) {
        ASSERT_LT(ranked[i - 1].index, ranked[i].index);
      }
    }
  }
}

TEST_F(IndexTest, UnknownIntentThrows) {
  EXPECT_THROW(index_->Retrieve(Intent::kQuit, std::nullopt, Template{}), HaggleError);
}

TEST_F(IndexTest, JsonRoundTripRebuildsDerivedData) {
  const RetrievalIndex copy = RetrievalIndex::FromJson(index_->ToJson());
  EXPECT_EQ(copy.candidates(), index_->candidates());
  EXPECT_EQ(copy.idf(), index_->idf());
  EXPECT_EQ(copy.lm().vocab(), index_->lm().vocab());
}

TEST_F(IndexTest, TopKSamplingMatchesSoftmaxOfLmScores) {
  const Candidate& probe = index_->candidates().front();
  const auto ranked = index_->Retrieve(Intent::kInquire, std::nullopt, probe.context_template);
  ASSERT_GE(ranked.size(), 10u);
  GeneratorConfig config;
  config.top_k = 10;
  std::vector<double> expected(10);
  double total = 0;
  for (int i = 0; i < 10; ++i) {
    expected[i] = std::exp(index_->lm().Score(
        index_->candidates()[ranked[i].index].response_template.Terms(), true));
    total += expected[i];
  }
  std::map<std::size_t, int> position;
  for (int i = 0; i < 10; ++i) position[ranked[i].index] = i;
  std::vector<int> observed(10, 0);
  Rng rng(77);
  const int n = 10000;
  for (int draw = 0; draw < n; ++draw) {
    const std::size_t pick = SampleResponse(ranked, *index_, config, rng);
    ASSERT_TRUE(position.contains(pick));
    ++observed[position[pick]];
  }
  double chi2 = 0;
  for (int i = 0; i < 10; ++i) {
    const double e = n * expected[i] / total;
    chi2 += (observed[i] - e) * (observed[i] - e) / e;
  }
  const boost::math::chi_squared dist(9);
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 0.01) << "chi2 " << chi2;
}

TEST_F(IndexTest, RealizedUtterancesReparseToTheirActs) {
  const Parser parser(*lexicon_);
  Rng rng(8);
  int checked = 0;
  for (const auto& d : *parsed_) {
    DialogueState state(d.scenario);
    for (std::size_t t = 0; t < d.events.size() && !state.terminal(); ++t) {
      const Role speaker = d.events[t].role;
      if (!state.pending_offer()) {
        for (const Intent intent : ContextValidIntents(state, speaker)) {
          if (IsStructural(intent)) continue;
          CoarseDialogueAct act = CoarseDialogueAct::Of(intent);
          if (TakesArgument(intent)) {
            const auto& cb = std::get<CBScenario>(d.scenario);
            act.price = Money::FromCents(cb.buyer_target.cents() / 2 +
                                         rng.UniformInt(static_cast<int>(cb.listing_price.cents())));
          }
          const Realization r = Realize(*index_, parser, act, state, speaker, {}, rng);
          const auto parsed = parser.ParseMessage(r.text, ParseContext::ForNextEvent(state, speaker));
          ASSERT_EQ(parsed.intent, r.act.intent) << r.text;
          if (r.act.price) {
            const auto& cb = std::get<CBScenario>(d.scenario);
            ASSERT_TRUE(parsed.price.has_value()) << r.text;
            ASSERT_EQ(PriceToBin(speaker, cb, *parsed.price), PriceToBin(speaker, cb, *r.act.price));
          }
          ++checked;
        }
      }
      state.Append(d.events[t], d.acts[t]);
    }
  }
  EXPECT_GT(checked, 1000);
}

TEST(RealizeTest, StructuralActsAreRejected) {
  const Parser parser(SmallLexicon());
  DialogueState state(TvScenario());
  Rng rng(1);
  EXPECT_THROW(Realize(RetrievalIndex(), parser, CoarseDialogueAct::Of(Intent::kQuit), state,
                       Role::kBuyer, {}, rng),
               HaggleError);
}

TEST(RealizeTest, EmptyIndexFallsBackToCannedText) {
  const Parser parser(SmallLexicon());
  DialogueState state(TvScenario());
  Rng rng(1);
  const Realization r = Realize(RetrievalIndex(), parser,
                                CoarseDialogueAct::WithPrice(Intent::kPropose, Dollars(180)), state,
                                Role::kBuyer, {}, rng);
  EXPECT_TRUE(r.fallback);
  EXPECT_EQ(r.text, "how about $180 ?");
  EXPECT_EQ(r.attempts, 0);
}

TEST(RealizeTest, DnFallbackCarriesTheSplit) {
  const Parser parser(SmallLexicon());
  const DNScenario dn = testing::SimpleDnScenario();
  DialogueState state(dn);
  Rng rng(1);
  const Split split = Split::FromShare(0, {1, 2, 0}, dn.counts);
  const Realization r = Realize(RetrievalIndex(), parser,
                                CoarseDialogueAct::WithSplit(Intent::kPropose, split), state,
                                Role::kAgentA, {}, rng);
  const auto parsed = parser.ParseMessage(r.text, ParseContext::ForNextEvent(state, Role::kAgentA));
  EXPECT_EQ(parsed.intent, Intent::kPropose);
  EXPECT_EQ(parsed.split, split);
}

}  // namespace
}  // namespace haggle
