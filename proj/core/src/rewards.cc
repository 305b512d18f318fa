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

#include "haggle/rewards.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "haggle/error.h"

namespace haggle {

std::string_view RewardKindName(RewardKind kind) {
  switch (kind) {
    case RewardKind::kUtility: return "utility";
    case RewardKind::kFairness: return "fairness";
    case RewardKind::kLength: return "length";
  }
  return "?";
}

RewardKind ParseRewardKind(std::string_view name) {
  if (name == "utility") return RewardKind::kUtility;
  if (name == "fairness") return RewardKind::kFairness;
  if (name == "length") return RewardKind::kLength;
  throw HaggleError("unknown reward kind '" + std::string(name) + "'");
}

double EpisodeReward(RewardKind kind, const Outcome& outcome, const DialogueState& dialogue,
                     Role perspective, const RewardOptions& options) {
  if (!dialogue.terminal()) throw HaggleError("reward of a dialogue that has not ended");
  if (!outcome.agreement) return kNoAgreementReward;
  const double self = outcome.utilities[Slot(perspective)];
  const double other = outcome.utilities[1 - Slot(perspective)];
  switch (kind) {
    case RewardKind::kUtility: return self;
    case RewardKind::kFairness: return options.signed_fairness ? self - other : -std::abs(self - other);
    case RewardKind::kLength: return static_cast<double>(dialogue.num_events());
  }
  return 0;
}

double EpisodeReward(RewardKind kind, const DialogueState& dialogue, Role perspective,
                     const RewardOptions& options) {
  if (!dialogue.terminal()) throw HaggleError("reward of a dialogue that has not ended");
  return EpisodeReward(kind, ComputeOutcome(dialogue), dialogue, perspective, options);
}

nlohmann::json EpisodeMetrics::ToJson() const {
  return {{"episodes", episodes},
          {"agreement_rate", agreement_rate},
          {"avg_turns", avg_turns},
          {"avg_utility", avg_utility},
          {"avg_utility_agreed", avg_utility_agreed},
          {"avg_utility_gap_agreed", avg_utility_gap_agreed},
          {"num_utterances", num_utterances},
          {"distinct_ratio", distinct_ratio},
          {"top3_concentration", top3_concentration}};
}

EpisodeMetrics ComputeMetrics(std::span<const DialogueState> episodes,
                              std::optional<int> utterance_slot) {
  if (episodes.empty()) throw HaggleError("no episodes to summarize");
  EpisodeMetrics m;
  m.episodes = static_cast<int>(episodes.size());
  int agreed = 0;
  std::map<std::string, int> sentences;
  for (const auto& d : episodes) {
    const Outcome o = ComputeOutcome(d);
    m.avg_turns += d.num_events();
    for (int s = 0; s < 2; ++s) m.avg_utility[s] += o.utilities[s];
    if (o.agreement) {
      ++agreed;
      for (int s = 0; s < 2; ++s) m.avg_utility_agreed[s] += o.utilities[s];
      m.avg_utility_gap_agreed += std::abs(o.utilities[0] - o.utilities[1]);
    }
    for (const auto& e : d.events()) {
      if (e.kind != EventKind::kMessage || !e.text) continue;
      if (utterance_slot && Slot(e.role) != *utterance_slot) continue;
      ++sentences[*e.text];
      ++m.num_utterances;
    }
  }
  const double n = m.episodes;
  m.agreement_rate = agreed / n;
  m.avg_turns /= n;
  for (int s = 0; s < 2; ++s) {
    m.avg_utility[s] /= n;
    if (agreed > 0) m.avg_utility_agreed[s] /= agreed;
  }
  if (agreed > 0) m.avg_utility_gap_agreed /= agreed;
  if (m.num_utterances > 0) {
    m.distinct_ratio = static_cast<double>(sentences.size()) / m.num_utterances;
    std::vector<int> counts;
    for (const auto& [s, c] : sentences) counts.push_back(c);
    std::sort(counts.rbegin(), counts.rend());
    int top = 0;
    for (std::size_t i = 0; i < std::min<std::size_t>(3, counts.size()); ++i) top += counts[i];
    m.top3_concentration = static_cast<double>(top) / m.num_utterances;
  }
  return m;
}

std::string MetricsCsvHeader() {
  return "label,episodes,agreement_rate,avg_turns,avg_utility_0,avg_utility_1,"
         "avg_utility_agreed_0,avg_utility_agreed_1,avg_utility_gap_agreed,num_utterances,"
         "distinct_ratio,top3_concentration";
}

std::string MetricsCsvRow(std::string_view label, const EpisodeMetrics& m) {
  std::ostringstream out;
  out.precision(6);
  out << label << ',' << m.episodes << ',' << m.agreement_rate << ',' << m.avg_turns << ','
      << m.avg_utility[0] << ',' << m.avg_utility[1] << ',' << m.avg_utility_agreed[0] << ','
      << m.avg_utility_agreed[1] << ',' << m.avg_utility_gap_agreed << ',' << m.num_utterances
      << ',' << m.distinct_ratio << ',' << m.top3_concentration;
  return out.str();
}

}  // namespace haggle
