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

#include <algorithm>
#include <cmath>
#include <string>

#include "haggle/error.h"
#include "haggle/parser.h"
#include "haggle/policy.h"

namespace haggle {
namespace {

constexpr int kStart = -1;

int IntentKey(std::optional<Intent> intent) {
  return intent ? static_cast<int>(*intent) : kStart;
}

std::string KeyName(int k) {
  return k == kStart ? "<s>" : std::string(IntentName(static_cast<Intent>(k)));
}

int KeyFromName(const std::string& name) {
  return name == "<s>" ? kStart : static_cast<int>(ParseIntent(name));
}

// Intents of the last two acts.
std::pair<std::optional<Intent>, std::optional<Intent>> LastTwoIntents(const DialogueState& state) {
  const auto& acts = state.acts();
  const std::size_t n = acts.size();
  std::optional<Intent> p2, p1;
  if (n >= 1) p1 = acts[n - 1].intent;
  if (n >= 2) p2 = acts[n - 2].intent;
  return {p2, p1};
}

const CoarseDialogueAct* LastPartnerAct(const DialogueState& state, Role self) {
  if (state.events().empty() || state.events().back().role == self) return nullptr;
  return &state.acts().back();
}

int ShareValue(const DNScenario& dn, Role self, const ItemCounts& share) {
  int v = 0;
  for (int i = 0; i < kNumItems; ++i) v += share[i] * dn.values[Slot(self)][i];
  return v;
}

// Own share of a possibly partial split; unstated items count as not ours.
ItemCounts OwnShare(const DNScenario& dn, Role self, const Split& split) {
  return split.Completed(dn.counts).Share(Slot(self));
}

}  // namespace

IntentLM IntentLM::Fit(std::span<const std::vector<Intent>> sequences, double smoothing) {
  if (!(smoothing > 0) || !std::isfinite(smoothing)) {
    throw HaggleError("intent LM smoothing must be positive");
  }
  IntentLM lm;
  lm.smoothing_ = smoothing;
  for (const auto& seq : sequences) {
    int p2 = kStart, p1 = kStart;
    for (const Intent intent : seq) {
      auto& row = lm.counts_[{p2, p1}];
      row[static_cast<int>(intent)] += 1;
      p2 = p1;
      p1 = static_cast<int>(intent);
    }
  }
  return lm;
}

double IntentLM::Prob(Intent next, std::optional<Intent> prev2, std::optional<Intent> prev1) const {
  const auto it = counts_.find({IntentKey(prev2), IntentKey(prev1)});
  double c = 0, total = 0;
  if (it != counts_.end()) {
    c = it->second[static_cast<int>(next)];
    for (const double x : it->second) total += x;
  }
  return (c + smoothing_) / (total + smoothing_ * kNumIntents);
}

Intent IntentLM::Sample(Rng& rng, std::optional<Intent> prev2, std::optional<Intent> prev1,
                        std::span<const Intent> allowed) const {
  if (allowed.empty()) throw HaggleError("no intents to sample from");
  std::vector<double> weights;
  weights.reserve(allowed.size());
  for (const Intent i : allowed) weights.push_back(Prob(i, prev2, prev1));
  return allowed[rng.Categorical(weights)];
}

nlohmann::json IntentLM::ToJson() const {
  nlohmann::json contexts = nlohmann::json::array();
  for (const auto& [key, row] : counts_) {
    nlohmann::json counts = nlohmann::json::object();
    for (int i = 0; i < kNumIntents; ++i) {
      if (row[i] != 0) counts[std::string(IntentName(static_cast<Intent>(i)))] = row[i];
    }
    contexts.push_back({{"prev2", KeyName(key[0])}, {"prev1", KeyName(key[1])}, {"counts", counts}});
  }
  return {{"smoothing", smoothing_}, {"contexts", contexts}};
}

IntentLM IntentLM::FromJson(const nlohmann::json& j) {
  IntentLM lm;
  try {
    lm.smoothing_ = j.at("smoothing").get<double>();
    for (const auto& c : j.at("contexts")) {
      auto& row = lm.counts_[{KeyFromName(c.at("prev2")), KeyFromName(c.at("prev1"))}];
      for (const auto& [name, v] : c.at("counts").items()) {
        row[static_cast<int>(ParseIntent(name))] = v.get<double>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("bad intent LM: ") + e.what());
  }
  if (!(lm.smoothing_ > 0)) throw SchemaError("intent LM smoothing must be positive");
  return lm;
}

CoarseDialogueAct HybridNextActCB(const DialogueState& state, Role self, const IntentLM& lm,
                                  const HybridConfig& config, Rng& rng) {
  const auto& cb = std::get<CBScenario>(state.scenario());
  const double fraction = config.seller_bottomline_fraction;
  if (const auto& pending = state.pending_offer(); pending && pending->role != self) {
    return CoarseDialogueAct::Of(WithinBottomline(self, cb, *pending->act.price, fraction)
                                     ? Intent::kAccept
                                     : Intent::kReject);
  }

  const Role partner = Partner(self);
  const Money target = TargetPrice(self, cb);
  const Money bottom = BottomlinePrice(self, cb, fraction);
  const auto& own_prop = state.proposal(Slot(self));
  const auto& partner_prop = state.proposal(Slot(partner));
  const bool partner_ok =
      partner_prop && WithinBottomline(self, cb, *partner_prop->price, fraction);

  const auto counter = [&] {
    if (!partner_prop) return CoarseDialogueAct::WithPrice(Intent::kPropose, target);
    Money mid = Midpoint(own_prop ? *own_prop->price : target, *partner_prop->price);
    mid = self == Role::kSeller ? std::max(mid, bottom) : std::min(mid, bottom);
    return CoarseDialogueAct::WithPrice(Intent::kCounter, mid);
  };
  const auto offer = [&] {
    return partner_ok ? CoarseDialogueAct::WithPrice(Intent::kOffer, *partner_prop->price)
                      : counter();
  };

  const CoarseDialogueAct* last = LastPartnerAct(state, self);
  if (partner_ok && last && last->intent == Intent::kAgree) return offer();
  if (state.num_events() >= config.offer_deadline) return offer();

  std::vector<Intent> allowed = ContextValidIntents(state, self);
  std::erase(allowed, Intent::kQuit);
  const auto [p2, p1] = LastTwoIntents(state);
  const Intent intent = lm.Sample(rng, p2, p1, allowed);
  switch (intent) {
    case Intent::kPropose: return CoarseDialogueAct::WithPrice(Intent::kPropose, target);
    case Intent::kCounter: return counter();
    case Intent::kOffer: return offer();
    default: return CoarseDialogueAct::Of(intent);
  }
}

PartnerEstimate UniformPartnerEstimate(const DNScenario&) {
  const double v = static_cast<double>(kDNValueTotal) / kNumItems;
  return {v, v, v};
}

PartnerEstimate UpdatePartnerEstimate(const PartnerEstimate& estimate, const DNScenario& scenario,
                                      const CoarseDialogueAct& partner_act, Role partner) {
  if (!partner_act.split) return estimate;
  const ItemCounts requested = partner_act.split->Completed(scenario.counts).Share(Slot(partner));
  PartnerEstimate out = estimate;
  double total = 0;
  for (int i = 0; i < kNumItems; ++i) {
    out[i] += requested[i];
    total += out[i];
  }
  if (!(total > 0)) return estimate;
  for (double& v : out) v *= kDNValueTotal / total;
  return out;
}

PartnerEstimate EstimateFromHistory(const DialogueState& state, Role self) {
  const auto& dn = std::get<DNScenario>(state.scenario());
  PartnerEstimate est = UniformPartnerEstimate(dn);
  const Role partner = Partner(self);
  for (std::size_t i = 0; i < state.acts().size(); ++i) {
    if (state.events()[i].role != partner) continue;
    const auto& act = state.acts()[i];
    if (act.intent == Intent::kPropose || act.intent == Intent::kCounter ||
        act.intent == Intent::kOffer) {
      est = UpdatePartnerEstimate(est, dn, act, partner);
    }
  }
  return est;
}

std::optional<ItemCounts> ConcedeOneUnit(const ItemCounts& own_share, const DNScenario& scenario,
                                         Role self, const PartnerEstimate& estimate) {
  const auto& values = scenario.values[Slot(self)];
  int give = -1;
  for (int i = 0; i < kNumItems; ++i) {
    if (own_share[i] <= 0) continue;
    if (give < 0 || values[i] - estimate[i] < values[give] - estimate[give]) give = i;
  }
  if (give < 0) return std::nullopt;
  ItemCounts out = own_share;
  --out[give];
  for (int i = 0; i < kNumItems; ++i) {
    if (i != give && estimate[i] == 0.0 && out[i] < scenario.counts[i]) {
      ++out[i];
      break;
    }
  }
  return out;
}

CoarseDialogueAct HybridNextActDN(const DialogueState& state, Role self,
                                  const HybridConfig& config) {
  const auto& dn = std::get<DNScenario>(state.scenario());
  const Role partner = Partner(self);
  const auto& events = state.events();
  const auto& acts = state.acts();

  // Partner proposal before the one at index `end` (exclusive).
  const auto previous_partner = [&](std::size_t end) {
    return LatestProposal(std::span(events).first(end), std::span(acts).first(end), partner);
  };
  const auto good_enough = [&](const Split& split, std::size_t index) {
    const int u = ShareValue(dn, self, OwnShare(dn, self, split));
    if (u >= config.dn_target) return true;
    const auto prev = previous_partner(index);
    return prev && u >= ShareValue(dn, self, OwnShare(dn, self, *prev->split));
  };

  if (const auto& pending = state.pending_offer(); pending && pending->role != self) {
    return CoarseDialogueAct::Of(good_enough(*pending->act.split, events.size() - 1)
                                     ? Intent::kAccept
                                     : Intent::kReject);
  }

  const CoarseDialogueAct* last = LastPartnerAct(state, self);
  if (last && last->intent == Intent::kAgree) {
    for (std::size_t i = acts.size(); i-- > 0;) {
      const auto& a = acts[i];
      if ((a.intent == Intent::kPropose || a.intent == Intent::kCounter) &&
          a.split->IsComplete(dn.counts)) {
        return CoarseDialogueAct::WithSplit(Intent::kOffer, *a.split);
      }
    }
  }

  const auto& own_prop = state.proposal(Slot(self));
  ItemCounts own_share{};
  if (own_prop) {
    own_share = OwnShare(dn, self, *own_prop->split);
  } else {
    for (int i = 0; i < kNumItems; ++i) {
      own_share[i] = dn.values[Slot(self)][i] > 0 ? dn.counts[i] : 0;
    }
  }

  const auto& partner_prop = state.proposal(Slot(partner));
  if (!partner_prop) {
    return CoarseDialogueAct::WithSplit(Intent::kPropose,
                                        Split::FromShare(Slot(self), own_share, dn.counts));
  }
  // Index of the partner's latest proposal.
  std::size_t at = events.size();
  while (at-- > 0) {
    if (events[at].role == partner && acts[at].split) break;
  }
  if (last && last->split && good_enough(*partner_prop->split, at)) {
    return CoarseDialogueAct::Of(Intent::kAgree);
  }
  const auto conceded = ConcedeOneUnit(own_share, dn, self, EstimateFromHistory(state, self));
  if (!conceded) {
    return CoarseDialogueAct::WithSplit(Intent::kOffer,
                                        Split::FromShare(Slot(self), own_share, dn.counts));
  }
  return CoarseDialogueAct::WithSplit(Intent::kCounter,
                                      Split::FromShare(Slot(self), *conceded, dn.counts));
}

}  // namespace haggle
