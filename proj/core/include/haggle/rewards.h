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

#ifndef HAGGLE_REWARDS_H_
#define HAGGLE_REWARDS_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "haggle/types.h"

namespace haggle {

enum class RewardKind { kUtility, kFairness, kLength };

std::string_view RewardKindName(RewardKind kind);
RewardKind ParseRewardKind(std::string_view name);

inline constexpr double kNoAgreementReward = -1.0;

struct RewardOptions {
  // Fairness as u_self - u_other instead of -|u_self - u_other|.
  bool signed_fairness = false;
};

// Reward of a finished dialogue for one participant. -1 without agreement;
// otherwise the own utility, the negated utility gap, or the event count.
double EpisodeReward(RewardKind kind, const Outcome& outcome, const DialogueState& dialogue,
                     Role perspective, const RewardOptions& options = {});
double EpisodeReward(RewardKind kind, const DialogueState& dialogue, Role perspective,
                     const RewardOptions& options = {});

struct EpisodeMetrics {
  int episodes = 0;
  double agreement_rate = 0;
  double avg_turns = 0;
  // By slot, over all episodes (zero when no agreement).
  std::array<double, 2> avg_utility{};
  // By slot, over agreed episodes only; zero if none agreed.
  std::array<double, 2> avg_utility_agreed{};
  // Mean |u_0 - u_1| over agreed episodes.
  double avg_utility_gap_agreed = 0;
  int num_utterances = 0;
  double distinct_ratio = 0;
  // Share of utterances taken by the three most frequent ones.
  double top3_concentration = 0;

  nlohmann::json ToJson() const;
};

// Utterance statistics count messages of `utterance_slot` only when given.
EpisodeMetrics ComputeMetrics(std::span<const DialogueState> episodes,
                              std::optional<int> utterance_slot = std::nullopt);

std::string MetricsCsvHeader();
std::string MetricsCsvRow(std::string_view label, const EpisodeMetrics& m);

}  // namespace haggle

#endif  // HAGGLE_REWARDS_H_
