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

#include "haggle/pricing.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "haggle/error.h"
#include "test_support.h"

namespace haggle {
namespace {

using testing::Dollars;
using testing::RandomCbScenario;
using testing::TvScenario;

// Independent form: utility falls linearly from +1 at the buyer's target to
// -1 at the listing price.
double BuyerUtilityOracle(const CBScenario& s, double price) {
  const double t = s.buyer_target.dollars();
  const double l = s.listing_price.dollars();
  return 1.0 - 2.0 * (price - t) / (l - t);
}

TEST(UtilityTest, AnchorsAreExact) {
  const CBScenario s = TvScenario();
  EXPECT_EQ(Utility(Role::kBuyer, s, s.buyer_target), 1.0);
  EXPECT_EQ(Utility(Role::kSeller, s, s.listing_price), 1.0);
  const Money mid = Midpoint(s.listing_price, s.buyer_target);
  EXPECT_EQ(Utility(Role::kBuyer, s, mid), 0.0);
  EXPECT_EQ(Utility(Role::kSeller, s, mid), 0.0);
}

TEST(UtilityTest, ZeroSumAndMatchesOracleOnRandomScenarios) {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const CBScenario s = RandomCbScenario(rng);
    const Money p = Money::FromCents(rng.UniformInt(static_cast<int>(2 * s.listing_price.cents())));
    const double ub = Utility(Role::kBuyer, s, p);
    const double us = Utility(Role::kSeller, s, p);
    EXPECT_NEAR(ub + us, 0.0, 1e-9);
    EXPECT_NEAR(ub, BuyerUtilityOracle(s, p.dollars()), 1e-9);
  }
}

TEST(UtilityTest, DegenerateScenarioThrows) {
  CBScenario s = TvScenario();
  s.buyer_target = s.listing_price;
  EXPECT_THROW(Utility(Role::kBuyer, s, Dollars(200)), HaggleError);
  EXPECT_THROW(Utility(Role::kAgentA, TvScenario(), Dollars(200)), HaggleError);
}

TEST(DnUtilityTest, DotProductOfOwnShare) {
  const DNScenario dn = testing::SimpleDnScenario();
  const Split split = Split::FromShare(0, {1, 1, 0}, dn.counts);
  EXPECT_EQ(DnUtility(Role::kAgentA, dn, split), 4 + 3);
  EXPECT_EQ(DnUtility(Role::kAgentB, dn, split), 2 * 1 + 2 * 3);
  Split partial;
  partial.allocation[0][0] = 1;
  EXPECT_THROW(DnUtility(Role::kAgentA, dn, partial), HaggleError);
}

TEST(BottomlineTest, TargetsAndBottomlines) {
  const CBScenario s = TvScenario();
  EXPECT_EQ(TargetPrice(Role::kBuyer, s), Dollars(192));
  EXPECT_EQ(TargetPrice(Role::kSeller, s), Dollars(275));
  EXPECT_EQ(BottomlinePrice(Role::kBuyer, s), Dollars(275));
  EXPECT_EQ(BottomlinePrice(Role::kSeller, s), Dollars(192.5));
  EXPECT_TRUE(WithinBottomline(Role::kSeller, s, Dollars(192.5)));
  EXPECT_FALSE(WithinBottomline(Role::kSeller, s, Dollars(192.49)));
  EXPECT_TRUE(WithinBottomline(Role::kBuyer, s, Dollars(275)));
  EXPECT_FALSE(WithinBottomline(Role::kBuyer, s, Dollars(275.01)));
}

TEST(NormalizeTest, AnchorsMapToZeroAndOne) {
  const CBScenario s = TvScenario();
  EXPECT_EQ(NormalizePrice(Role::kSeller, s, Dollars(192.5)), 0.0);
  EXPECT_EQ(NormalizePrice(Role::kSeller, s, Dollars(275)), 1.0);
  EXPECT_EQ(NormalizePrice(Role::kBuyer, s, Dollars(275)), 0.0);
  EXPECT_EQ(NormalizePrice(Role::kBuyer, s, Dollars(192)), 1.0);
  EXPECT_EQ(PriceToBin(Role::kSeller, s, Dollars(192.5)).ToString(), "0.00");
  // 245 for the seller: (245 - 192.5) / 82.5 = 0.6363... -> 0.64.
  EXPECT_EQ(PriceToBin(Role::kSeller, s, Dollars(245)).hundredths(), 64);
}

TEST(NormalizeTest, SellerBottomlineIsBinZeroOnRandomScenarios) {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const CBScenario s = RandomCbScenario(rng);
    const Money bottom = BottomlinePrice(Role::kSeller, s);
    EXPECT_EQ(PriceToBin(Role::kSeller, s, bottom).hundredths(), 0);
  }
}

TEST(BinTest, ClampsAndRounds) {
  EXPECT_EQ(BinPrice(5.0).hundredths(), 200);
  EXPECT_EQ(BinPrice(-7.0).hundredths(), -200);
  EXPECT_EQ(BinPrice(0.005).hundredths(), 1);
  EXPECT_EQ(BinPrice(-0.005).hundredths(), -1);
  EXPECT_EQ(BinPrice(0.6363).hundredths(), 64);
  EXPECT_THROW(BinPrice(std::nan("")), HaggleError);
  EXPECT_THROW(PriceBin::FromHundredths(201), HaggleError);
  EXPECT_EQ(PriceBin::kNumBins, 401);
  EXPECT_EQ(PriceBin::FromHundredths(-125).ToString(), "-1.25");
  EXPECT_EQ(PriceBin::FromIndex(0).hundredths(), -200);
}

TEST(BinTest, DenormalizeRoundTripWithinOneCent) {
  Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    const CBScenario s = RandomCbScenario(rng);
    for (Role role : {Role::kBuyer, Role::kSeller}) {
      const double bottom = BottomlinePrice(role, s).dollars();
      const double target = TargetPrice(role, s).dollars();
      for (int h = PriceBin::kMinHundredths; h <= PriceBin::kMaxHundredths; ++h) {
        const PriceBin bin = PriceBin::FromHundredths(h);
        const Money p = DenormalizePrice(role, s, bin);
        // Oracle: the exact affine inverse.
        const double exact = bottom + h / 100.0 * (target - bottom);
        ASSERT_LE(std::abs(p.dollars() - std::max(0.0, exact)), 0.005 + 1e-9);
        const Money again = DenormalizePrice(role, s, PriceToBin(role, s, p));
        ASSERT_LE(std::abs(again.cents() - p.cents()), 1) << "bin " << h;
      }
    }
  }
}

}  // namespace
}  // namespace haggle
