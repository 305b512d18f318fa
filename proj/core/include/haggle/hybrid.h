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

#ifndef HAGGLE_HYBRID_H_
#define HAGGLE_HYBRID_H_

#include <array>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "haggle/pricing.h"
#include "haggle/rng.h"
#include "haggle/types.h"

namespace haggle {

// Laplace-smoothed trigram model over intent sequences.
class IntentLM {
 public:
  static constexpr double kDefaultSmoothing = 0.1;

  IntentLM() = default;
  static IntentLM Fit(std::span<const std::vector<Intent>> sequences,
                      double smoothing = kDefaultSmoothing);

  // p(next | prev2, prev1); nullopt marks the dialogue start.
  double Prob(Intent next, std::optional<Intent> prev2, std::optional<Intent> prev1) const;
  // Draw restricted to `allowed`, renormalized.
  Intent Sample(Rng& rng, std::optional<Intent> prev2, std::optional<Intent> prev1,
                std::span<const Intent> allowed) const;

  double smoothing() const { return smoothing_; }

  nlohmann::json ToJson() const;
  static IntentLM FromJson(const nlohmann::json& j);

  bool operator==(const IntentLM&) const = default;

 private:
  using Key = std::array<int, 2>;
  double smoothing_ = kDefaultSmoothing;
  std::map<Key, std::array<double, kNumIntents>> counts_;
};

struct HybridConfig {
  double seller_bottomline_fraction = kSellerBottomlineFraction;
  // From this many events on, CB agents stop sampling intents and push
  // towards an offer.
  int offer_deadline = 12;
  // DN agents agree once a partner proposal is worth at least this much.
  int dn_target = 6;
};

// Rule-based CB act choice. A pending partner offer is accepted iff it is
// within the bottomline. Otherwise an intent is sampled from the LM and
// given its price: propose at the target, counter at the midpoint of the
// two latest proposals clamped to the bottomline, offer at the partner's
// latest proposal when acceptable.
CoarseDialogueAct HybridNextActCB(const DialogueState& state, Role self, const IntentLM& lm,
                                  const HybridConfig& config, Rng& rng);

// Per-item value estimate of the partner, summing to kDNValueTotal over
// the item counts.
using PartnerEstimate = std::array<double, kNumItems>;

PartnerEstimate UniformPartnerEstimate(const DNScenario& scenario);
// Adds the partner's requested counts to the estimate and rescales it.
PartnerEstimate UpdatePartnerEstimate(const PartnerEstimate& estimate, const DNScenario& scenario,
                                      const CoarseDialogueAct& partner_act, Role partner);
PartnerEstimate EstimateFromHistory(const DialogueState& state, Role self);

// Gives up one unit of the held item with the smallest own-minus-estimate
// value (lowest index on ties), then claims one unit of any partner-held
// item estimated worthless to the partner. Returns nullopt if the share
// cannot move.
std::optional<ItemCounts> ConcedeOneUnit(const ItemCounts& own_share, const DNScenario& scenario,
                                         Role self, const PartnerEstimate& estimate);

// Rule-based DN act choice driven by the partner estimate.
CoarseDialogueAct HybridNextActDN(const DialogueState& state, Role self, const HybridConfig& config);

}  // namespace haggle

#endif  // HAGGLE_HYBRID_H_
