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

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "haggle/error.h"

namespace haggle {
namespace {

void RequireCBRole(Role role) {
  if (TaskOf(role) != Task::kCraigslist) throw HaggleError("price functions need a CB role");
}

double RoundHalfAway(double x) {
  return std::round(x + std::copysign(std::abs(x) * 1e-12, x));
}

}  // namespace

double Utility(Role role, const CBScenario& scenario, Money final_price) {
  RequireCBRole(role);
  const double listing = static_cast<double>(scenario.listing_price.cents());
  const double target = static_cast<double>(scenario.buyer_target.cents());
  if (listing == target) throw HaggleError("degenerate midpoint");
  const double p = static_cast<double>(final_price.cents());
  // Both numerators are exact integers, so buyer == -seller bit for bit.
  const double buyer = (listing + target - 2.0 * p) / (listing - target);
  return role == Role::kBuyer ? buyer : -buyer;
}

int DnUtility(Role role, const DNScenario& scenario, const Split& split) {
  if (TaskOf(role) != Task::kDealOrNoDeal) throw HaggleError("DN utility needs a DN role");
  if (!split.IsComplete(scenario.counts)) throw HaggleError("DN utility needs a complete split");
  const int slot = Slot(role);
  int total = 0;
  for (int i = 0; i < kNumItems; ++i) total += scenario.values[slot][i] * *split.allocation[slot][i];
  return total;
}

Money TargetPrice(Role role, const CBScenario& scenario) {
  RequireCBRole(role);
  return role == Role::kBuyer ? scenario.buyer_target : scenario.listing_price;
}

Money BottomlinePrice(Role role, const CBScenario& scenario, double seller_fraction) {
  RequireCBRole(role);
  if (role == Role::kBuyer) return scenario.listing_price;
  return Money::FromDollars(scenario.listing_price.dollars() * seller_fraction);
}

double NormalizePrice(Role role, const CBScenario& scenario, Money price) {
  const double bottom = static_cast<double>(BottomlinePrice(role, scenario).cents());
  const double target = static_cast<double>(TargetPrice(role, scenario).cents());
  if (bottom == target) throw HaggleError("bottomline equals target");
  // For the buyer this is (bottom - p) / (bottom - target) with both signs flipped.
  return (static_cast<double>(price.cents()) - bottom) / (target - bottom);
}

PriceBin PriceBin::FromHundredths(int hundredths) {
  if (hundredths < kMinHundredths || hundredths > kMaxHundredths) {
    throw HaggleError("price bin out of range");
  }
  return PriceBin(hundredths);
}

std::string PriceBin::ToString() const {
  char buf[16];
  const int magnitude = std::abs(hundredths_);
  std::snprintf(buf, sizeof(buf), "%s%d.%02d", hundredths_ < 0 ? "-" : "", magnitude / 100,
                magnitude % 100);
  return buf;
}

PriceBin BinPrice(double normalized) {
  if (!std::isfinite(normalized)) throw HaggleError("cannot bin a non-finite price");
  const double clamped = std::clamp(normalized, -2.0, 2.0);
  return PriceBin::FromHundredths(static_cast<int>(RoundHalfAway(clamped * 100.0)));
}

Money DenormalizePrice(Role role, const CBScenario& scenario, PriceBin bin) {
  const double bottom = static_cast<double>(BottomlinePrice(role, scenario).cents());
  const double target = static_cast<double>(TargetPrice(role, scenario).cents());
  if (bottom == target) throw HaggleError("bottomline equals target");
  const double cents = RoundHalfAway(bottom + bin.value() * (target - bottom));
  return Money::FromCents(static_cast<std::int64_t>(std::max(0.0, cents)));
}

PriceBin PriceToBin(Role role, const CBScenario& scenario, Money price) {
  return BinPrice(NormalizePrice(role, scenario, price));
}

bool WithinBottomline(Role role, const CBScenario& scenario, Money price, double seller_fraction) {
  const Money bottom = BottomlinePrice(role, scenario, seller_fraction);
  return role == Role::kBuyer ? price <= bottom : price >= bottom;
}

}  // namespace haggle
