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

#ifndef HAGGLE_PRICING_H_
#define HAGGLE_PRICING_H_

#include <string>

#include "haggle/money.h"
#include "haggle/types.h"

namespace haggle {

// Seller bottomline as a fraction of the listing price.
inline constexpr double kSellerBottomlineFraction = 0.7;

// CB utility of a final price. Linear, 1 at the role's target (buyer target
// or listing price), 0 at the midpoint of listing and buyer target.
double Utility(Role role, const CBScenario& scenario, Money final_price);

// DN utility: the role's values dotted with its share of a complete split.
int DnUtility(Role role, const DNScenario& scenario, const Split& split);

// Target and bottomline from the role's point of view.
Money TargetPrice(Role role, const CBScenario& scenario);
Money BottomlinePrice(Role role, const CBScenario& scenario,
                      double seller_fraction = kSellerBottomlineFraction);

// Maps target to 1 and bottomline to 0, linear elsewhere (unbounded).
double NormalizePrice(Role role, const CBScenario& scenario, Money price);

// A binned normalized price in hundredths, clamped to [-2.00, 2.00].
class PriceBin {
 public:
  static constexpr int kMinHundredths = -200;
  static constexpr int kMaxHundredths = 200;
  static constexpr int kNumBins = kMaxHundredths - kMinHundredths + 1;

  static PriceBin FromHundredths(int hundredths);
  static PriceBin FromIndex(int index) { return FromHundredths(index + kMinHundredths); }

  int hundredths() const { return hundredths_; }
  int index() const { return hundredths_ - kMinHundredths; }
  double value() const { return hundredths_ / 100.0; }
  // "0.60", "-1.25".
  std::string ToString() const;

  auto operator<=>(const PriceBin&) const = default;

 private:
  explicit PriceBin(int hundredths) : hundredths_(hundredths) {}
  int hundredths_ = 0;
};

// Clamp to [-2, 2] then round half away from zero to two decimals.
PriceBin BinPrice(double normalized);

// Inverse of NormalizePrice at a bin value, rounded to cents and floored at 0.
Money DenormalizePrice(Role role, const CBScenario& scenario, PriceBin bin);

// Convenience: BinPrice(NormalizePrice(...)).
PriceBin PriceToBin(Role role, const CBScenario& scenario, Money price);

// Whether the price is not worse than the role's bottomline.
bool WithinBottomline(Role role, const CBScenario& scenario, Money price,
                      double seller_fraction = kSellerBottomlineFraction);

}  // namespace haggle

#endif  // HAGGLE_PRICING_H_
