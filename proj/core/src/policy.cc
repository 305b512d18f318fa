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

#include "haggle/policy.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

#include "haggle/error.h"
#include "haggle/parser.h"
#include "haggle/pricing.h"

namespace haggle {
namespace {

using namespace act_vocab;

const char* SlotKey(const TokenContext& c) { return c.act_prefix.empty() ? "I" : "A"; }

std::string TrigramKey(const TokenContext& c) {
  return std::string("t:") + SlotKey(c) + "|" + Name(c.prev2) + "|" + Name(c.prev1);
}
std::string BigramKey(const TokenContext& c) {
  return std::string("b:") + SlotKey(c) + "|" + Name(c.prev1);
}
std::string UnigramKey(const TokenContext& c) { return std::string("u:") + SlotKey(c); }

template <typename T>
int Sign(T x) {
  return (x > T{}) - (x < T{});
}

GapSign GapFromSign(int s) {
  return s < 0 ? GapSign::kNegative : (s == 0 ? GapSign::kZero : GapSign::kPositive);
}

int OwnValue(const DNScenario& dn, Role self, const Split& split) {
  const ItemCounts share = split.Completed(dn.counts).Share(Slot(self));
  int total = 0;
  for (int i = 0; i < kNumItems; ++i) total += share[i] * dn.values[Slot(self)][i];
  return total;
}

GapSign ComputeGap(const Scenario& scenario, const std::optional<CoarseDialogueAct>& own,
                   const std::optional<CoarseDialogueAct>& partner, Role self) {
  if (!own || !partner) return GapSign::kNone;
  if (const auto* cb = std::get_if<CBScenario>(&scenario)) {
    const int a = PriceToBin(self, *cb, *own->price).hundredths();
    const int b = PriceToBin(self, *cb, *partner->price).hundredths();
    return GapFromSign(Sign(a - b));
  }
  const auto& dn = std::get<DNScenario>(scenario);
  return GapFromSign(Sign(OwnValue(dn, self, *own->split) - OwnValue(dn, self, *partner->split)));
}

bool SameArgument(const Scenario& scenario, Role self, const CoarseDialogueAct& a,
                  const CoarseDialogueAct& b) {
  if (const auto* cb = std::get_if<CBScenario>(&scenario)) {
    return PriceToBin(self, *cb, *a.price) == PriceToBin(self, *cb, *b.price);
  }
  const auto& counts = std::get<DNScenario>(scenario).counts;
  return a.split->Completed(counts) == b.split->Completed(counts);
}

void CheckFinite(double w, const std::string& where) {
  if (!std::isfinite(w)) throw HaggleError("non-finite policy weight in " + where);
}

}  // namespace

std::string_view GapSignName(GapSign gap) {
  switch (gap) {
    case GapSign::kNone: return "none";
    case GapSign::kNegative: return "neg";
    case GapSign::kZero: return "zero";
    case GapSign::kPositive: return "pos";
  }
  return "none";
}

std::vector<TokenId> GrammarTokens(const TokenContext& c) {
  std::vector<TokenId> out;
  if (c.act_prefix.empty()) {
    for (int i = 0; i < kNumIntents; ++i) out.push_back(kFirstIntent + i);
    return out;
  }
  if (static_cast<int>(c.act_prefix.size()) >= kMaxActTokens) return out;
  const TokenId last = c.act_prefix.back();
  if (IsIntent(last)) {
    if (!TakesArgument(TokenIntent(last))) return {kEos};
    if (c.task == Task::kCraigslist) {
      for (int i = 0; i < PriceBin::kNumBins; ++i) out.push_back(kFirstBin + i);
    } else {
      for (int i = 0; i < kNumTriples; ++i) out.push_back(kFirstTriple + i);
    }
    return out;
  }
  if (IsTriple(last)) {
    out.push_back(kEos);
    const int item = static_cast<int>(TokenTriple(last).item);
    for (TokenId t = kFirstTriple; t < kSize; ++t) {
      if (static_cast<int>(TokenTriple(t).item) > item) out.push_back(t);
    }
    return out;
  }
  if (IsBin(last)) return {kEos};
  return out;
}

std::vector<TokenId> CandidateTokens(const TokenContext& c) {
  std::vector<TokenId> out;
  for (const TokenId t : GrammarTokens(c)) {
    if (IsIntent(t) && !c.allowed_intents.empty() &&
        std::find(c.allowed_intents.begin(), c.allowed_intents.end(), TokenIntent(t)) ==
            c.allowed_intents.end()) {
      continue;
    }
    if (IsTriple(t) && c.item_counts) {
      const Triple tr = TokenTriple(t);
      if (tr.count > (*c.item_counts)[static_cast<int>(tr.item)]) continue;
    }
    out.push_back(t);
  }
  return out;
}

const std::vector<double>* PolicyParams::Row(const std::string& feature) const {
  const auto it = rows_.find(feature);
  return it == rows_.end() ? nullptr : &it->second;
}

std::vector<double>& PolicyParams::MutableRow(const std::string& feature) {
  auto& row = rows_[feature];
  if (row.empty()) row.assign(kSize, 0.0);
  return row;
}

bool PolicyParams::AllFinite() const {
  for (const auto& [k, row] : rows_) {
    for (const double w : row) {
      if (!std::isfinite(w)) return false;
    }
  }
  return true;
}

nlohmann::json PolicyParams::ToJson() const {
  nlohmann::json features = nlohmann::json::object();
  for (const auto& [key, row] : rows_) {
    nlohmann::json weights = nlohmann::json::object();
    for (TokenId t = 0; t < kSize; ++t) {
      if (row[t] != 0.0) weights[Name(t)] = row[t];
    }
    features[key] = std::move(weights);
  }
  return {{"format", "haggle-act-policy"}, {"version", kFormatVersion}, {"features", features}};
}

PolicyParams PolicyParams::FromJson(const nlohmann::json& j) {
  if (!j.is_object() || j.value("format", "") != "haggle-act-policy") {
    throw SchemaError("not an act policy document");
  }
  if (j.value("version", 0) != kFormatVersion) throw SchemaError("unsupported act policy version");
  PolicyParams p;
  for (const auto& [key, weights] : j.at("features").items()) {
    auto& row = p.MutableRow(key);
    for (const auto& [name, w] : weights.items()) {
      if (!w.is_number()) throw SchemaError("policy weight is not a number");
      row[FromName(name)] = w.get<double>();
      CheckFinite(row[FromName(name)], key);
    }
  }
  return p;
}

std::vector<std::string> ActiveFeatures(const PolicyParams& params, const TokenContext& c) {
  std::vector<std::string> keys;
  if (std::string k = TrigramKey(c); params.HasFeature(k)) {
    keys.push_back(std::move(k));
  } else if (std::string b = BigramKey(c); params.HasFeature(b)) {
    keys.push_back(std::move(b));
  } else {
    keys.push_back(UnigramKey(c));
  }
  const std::string p1 = Name(c.prev1);
  keys.push_back(std::string("r:") + SlotKey(c) + "|" + std::string(RoleName(c.role)) + "|" + p1);
  keys.push_back(std::string("g:") + SlotKey(c) + "|" + std::string(GapSignName(c.gap)) + "|" + p1);
  return keys;
}

double TokenDistribution::ProbOf(TokenId t) const {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == t) return probs[i];
  }
  return 0.0;
}

TokenDistribution NextTokenDistribution(const PolicyParams& params, const TokenContext& c,
                                        bool apply_masks) {
  TokenDistribution d;
  d.tokens = apply_masks ? CandidateTokens(c) : GrammarTokens(c);
  if (d.tokens.empty()) throw HaggleError("no candidate act tokens");
  std::vector<const std::vector<double>*> rows;
  for (const auto& key : ActiveFeatures(params, c)) {
    if (const auto* row = params.Row(key)) rows.push_back(row);
  }
  d.probs.resize(d.tokens.size());
  double max_logit = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.tokens.size(); ++i) {
    double z = 0;
    for (const auto* row : rows) z += (*row)[d.tokens[i]];
    d.probs[i] = z;
    max_logit = std::max(max_logit, z);
  }
  double total = 0;
  for (double& p : d.probs) {
    p = std::exp(p - max_logit);
    total += p;
  }
  for (double& p : d.probs) p /= total;
  return d;
}

PolicyParams MleFit(std::span<const Trajectory> sequences, double smoothing) {
  if (!(smoothing >= 0) || !std::isfinite(smoothing)) throw HaggleError("invalid smoothing");
  struct Table {
    std::map<TokenId, double> counts;
    std::set<TokenId> support;
    double total = 0;
  };
  std::map<std::string, Table> tables;
  std::size_t steps = 0;
  for (const auto& seq : sequences) {
    for (const auto& step : seq) {
      const auto grammar = GrammarTokens(step.context);
      if (std::find(grammar.begin(), grammar.end(), step.token) == grammar.end()) {
        throw HaggleError("training token outside the act grammar");
      }
      for (const auto& key :
           {TrigramKey(step.context), BigramKey(step.context), UnigramKey(step.context)}) {
        auto& table = tables[key];
        table.counts[step.token] += 1;
        table.total += 1;
        table.support.insert(grammar.begin(), grammar.end());
      }
      ++steps;
    }
  }
  if (steps == 0) throw HaggleError("cannot fit an act policy on an empty corpus");

  PolicyParams params;
  for (const auto& [key, table] : tables) {
    auto& row = params.MutableRow(key);
    const double denom = table.total + smoothing * static_cast<double>(table.support.size());
    for (const TokenId t : table.support) {
      const auto it = table.counts.find(t);
      const double c = (it == table.counts.end() ? 0.0 : it->second) + smoothing;
      row[t] = c > 0 ? std::log(c / denom) : kLogZero;
    }
  }
  return params;
}

double MeanNegativeLogLikelihood(const PolicyParams& params, std::span<const Trajectory> sequences) {
  double total = 0;
  std::size_t n = 0;
  for (const auto& seq : sequences) {
    for (const auto& step : seq) {
      total -= std::log(NextTokenDistribution(params, step.context, false).ProbOf(step.token));
      ++n;
    }
  }
  if (n == 0) throw HaggleError("no steps to score");
  return total / static_cast<double>(n);
}

TokenContext HistoryContext(const Scenario& scenario, std::span<const DialogueEvent> events,
                            std::span<const CoarseDialogueAct> acts, Role self) {
  if (events.size() != acts.size()) throw HaggleError("events and acts differ in length");
  TokenContext c;
  c.task = TaskOf(scenario);
  c.role = self;
  for (std::size_t i = 0; i < acts.size(); ++i) {
    for (const TokenId t : ActToTokens(acts[i], scenario, self, events[i].role)) {
      if (!IsContent(t)) continue;
      c.prev2 = c.prev1;
      c.prev1 = t;
    }
  }
  c.gap = ComputeGap(scenario, LatestProposal(events, acts, self),
                     LatestProposal(events, acts, Partner(self)), self);
  return c;
}

std::vector<Intent> ContextValidIntents(const DialogueState& state, Role self) {
  if (const auto& pending = state.pending_offer(); pending && pending->role != self) {
    return {Intent::kAccept, Intent::kReject, Intent::kQuit};
  }
  const auto& events = state.events();
  const bool partner_inquired = !events.empty() && events.back().role != self &&
                                state.acts().back().intent == Intent::kInquire;
  std::vector<Intent> out;
  for (int i = 0; i < kNumIntents; ++i) {
    const auto intent = static_cast<Intent>(i);
    switch (intent) {
      case Intent::kAccept:
      case Intent::kReject: continue;
      case Intent::kGreet:
        if (state.num_events() >= 2) continue;
        break;
      case Intent::kCounter:
        if (!state.proposal(Slot(Partner(self)))) continue;
        break;
      case Intent::kInform:
        if (!partner_inquired) continue;
        break;
      case Intent::kUnknown:
        if (partner_inquired) continue;
        break;
      default: break;
    }
    out.push_back(intent);
  }
  return out;
}

TokenContext ContextForNextAct(const DialogueState& state, Role self) {
  TokenContext c = HistoryContext(state.scenario(), state.events(), state.acts(), self);
  c.allowed_intents = ContextValidIntents(state, self);
  if (const auto* dn = std::get_if<DNScenario>(&state.scenario())) c.item_counts = dn->counts;
  return c;
}

CoarseDialogueAct CanonicalizeAct(const CoarseDialogueAct& act, const DialogueState& state,
                                  Role self) {
  CoarseDialogueAct out = act;
  const auto& events = state.events();
  const bool partner_inquired = !events.empty() && events.back().role != self &&
                                state.acts().back().intent == Intent::kInquire;
  switch (act.intent) {
    case Intent::kPropose:
    case Intent::kCounter: {
      const auto& partner = state.proposal(Slot(Partner(self)));
      const bool differs = partner && !SameArgument(state.scenario(), self, act, *partner);
      out.intent = differs ? Intent::kCounter : Intent::kPropose;
      break;
    }
    case Intent::kGreet:
      if (state.num_events() >= 2) out.intent = Intent::kUnknown;
      break;
    case Intent::kUnknown:
      if (partner_inquired) out.intent = Intent::kInform;
      break;
    case Intent::kInform:
      if (!partner_inquired) out.intent = Intent::kUnknown;
      break;
    default: break;
  }
  if (out.intent == Intent::kUnknown && partner_inquired) out.intent = Intent::kInform;
  return out;
}

Trajectory DialogueSteps(const Scenario& scenario, std::span<const DialogueEvent> events,
                         std::span<const CoarseDialogueAct> acts, Role perspective) {
  if (events.size() != acts.size()) throw HaggleError("events and acts differ in length");
  Trajectory steps;
  for (std::size_t i = 0; i < acts.size(); ++i) {
    if (events[i].role != perspective) continue;
    TokenContext c = HistoryContext(scenario, events.first(i), acts.first(i), perspective);
    std::vector<TokenId> tokens = ActToTokens(acts[i], scenario, perspective, perspective);
    tokens.erase(tokens.begin());
    if (static_cast<int>(tokens.size()) < kMaxActTokens) tokens.push_back(kEos);
    for (const TokenId t : tokens) {
      steps.push_back({c, t});
      if (t == kEos) break;
      c.act_prefix.push_back(t);
      c.prev2 = c.prev1;
      c.prev1 = t;
    }
  }
  return steps;
}

EmittedAct EmitAct(const PolicyParams& params, const TokenContext& context,
                   const Scenario& scenario, Rng& rng, DecodeMode mode) {
  EmittedAct out;
  TokenContext c = context;
  c.act_prefix.clear();
  while (!CandidateTokens(c).empty()) {
    const TokenDistribution d = NextTokenDistribution(params, c);
    std::size_t pick = 0;
    if (mode == DecodeMode::kGreedy) {
      for (std::size_t i = 1; i < d.probs.size(); ++i) {
        if (d.probs[i] > d.probs[pick]) pick = i;
      }
    } else {
      pick = rng.Categorical(d.probs);
    }
    const TokenId t = d.tokens[pick];
    out.steps.push_back({c, t});
    out.tokens.push_back(t);
    if (t == kEos) break;
    c.act_prefix.push_back(t);
    c.prev2 = c.prev1;
    c.prev1 = t;
  }
  try {
    out.act = TokensToAct(c.act_prefix, scenario, context.role);
  } catch (const HaggleError&) {
    out.act = CoarseDialogueAct::Of(Intent::kUnknown);
    out.repaired = true;
    return out;
  }
  if (const auto* dn = std::get_if<DNScenario>(&scenario);
      dn && out.act.intent == Intent::kOffer && !out.act.split->IsComplete(dn->counts)) {
    // Unmentioned items go to the partner.
    auto& alloc = out.act.split->allocation;
    const int own = Slot(context.role);
    for (int i = 0; i < kNumItems; ++i) {
      if (!alloc[own][i] && !alloc[1 - own][i]) {
        alloc[own][i] = 0;
        alloc[1 - own][i] = dn->counts[i];
      }
    }
    out.repaired = true;
  }
  return out;
}

double TrajectoryLogProb(const PolicyParams& params, const Trajectory& trajectory) {
  double total = 0;
  for (const auto& step : trajectory) {
    const double p = NextTokenDistribution(params, step.context).ProbOf(step.token);
    if (!(p > 0)) throw HaggleError("trajectory step has zero probability");
    total += std::log(p);
  }
  return total;
}

Gradient TrajectoryLogProbGradient(const PolicyParams& params, const Trajectory& trajectory) {
  Gradient g;
  for (const auto& step : trajectory) {
    const TokenDistribution d = NextTokenDistribution(params, step.context);
    if (d.tokens.size() < 2) continue;
    for (const auto& key : ActiveFeatures(params, step.context)) {
      auto& row = g[key];
      for (std::size_t i = 0; i < d.tokens.size(); ++i) {
        row[d.tokens[i]] += (d.tokens[i] == step.token ? 1.0 : 0.0) - d.probs[i];
      }
    }
  }
  return g;
}

ReinforceResult ReinforceUpdate(PolicyParams& params, std::span<const Trajectory> trajectories,
                                double reward, Baseline& baseline, const TrainerConfig& config) {
  if (!std::isfinite(reward)) throw HaggleError("non-finite reward");
  ReinforceResult result;
  result.advantage = reward - baseline.value;
  if (result.advantage != 0.0) {
    const double scale = config.learning_rate * result.advantage;
    std::vector<std::pair<Gradient, const Trajectory*>> grads;
    for (const auto& traj : trajectories) {
      Gradient g = TrajectoryLogProbGradient(params, traj);
      for (const auto& [key, row] : g) {
        for (const auto& [t, v] : row) CheckFinite(scale * v, key);
      }
      grads.emplace_back(std::move(g), &traj);
    }
    for (const auto& [g, traj] : grads) {
      for (const auto& [key, row] : g) {
        auto& weights = params.MutableRow(key);
        for (const auto& [t, v] : row) weights[t] += scale * v;
      }
    }
    result.applied = !grads.empty();
  }
  baseline.Observe(reward);
  return result;
}

ReinforceResult ReinforceUpdate(PolicyParams& params, const Trajectory& trajectory, double reward,
                                Baseline& baseline, const TrainerConfig& config) {
  return ReinforceUpdate(params, std::span<const Trajectory>(&trajectory, 1), reward, baseline,
                         config);
}

}  // namespace haggle
