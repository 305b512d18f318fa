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

#ifndef HAGGLE_POLICY_H_
#define HAGGLE_POLICY_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "haggle/act_tokens.h"
#include "haggle/rng.h"
#include "haggle/types.h"

namespace haggle {

// Sign of (own current bin - partner current bin), both read from the
// acting role's point of view. DN compares own utilities of the two splits.
enum class GapSign { kNone, kNegative, kZero, kPositive };

std::string_view GapSignName(GapSign gap);

// Everything the act policy conditions on when scoring the next token.
struct TokenContext {
  Task task = Task::kCraigslist;
  Role role = Role::kBuyer;
  GapSign gap = GapSign::kNone;
  // Last two content tokens of the history, including the act prefix.
  TokenId prev2 = act_vocab::kBos;
  TokenId prev1 = act_vocab::kBos;
  // Tokens of the act emitted so far: [intent, args...].
  std::vector<TokenId> act_prefix;

  // Emission-time masks. Empty allowed_intents means every intent.
  std::vector<Intent> allowed_intents;
  std::optional<ItemCounts> item_counts;

  bool operator==(const TokenContext&) const = default;
};

// Grammar continuations, ignoring masks: an intent first, then a bin (CB)
// or up to three item-ordered split triples (DN), then </s>. Empty once an
// act is complete.
std::vector<TokenId> GrammarTokens(const TokenContext& context);
// GrammarTokens filtered by the emission masks.
std::vector<TokenId> CandidateTokens(const TokenContext& context);

struct PolicyStep {
  TokenContext context;
  TokenId token;
};
using Trajectory = std::vector<PolicyStep>;

// Weights of the log-linear act policy: one dense row over the vocabulary
// per feature. Features that are absent contribute zero.
class PolicyParams {
 public:
  static constexpr int kFormatVersion = 1;

  const std::vector<double>* Row(const std::string& feature) const;
  std::vector<double>& MutableRow(const std::string& feature);
  bool HasFeature(const std::string& feature) const { return rows_.contains(feature); }
  std::size_t num_features() const { return rows_.size(); }
  const std::map<std::string, std::vector<double>>& rows() const { return rows_; }

  bool AllFinite() const;

  // {"format": "haggle-act-policy", "version": 1, "features": {feature:
  // {token: weight}}} with sorted keys and only non-zero weights.
  nlohmann::json ToJson() const;
  static PolicyParams FromJson(const nlohmann::json& j);

  bool operator==(const PolicyParams&) const = default;

 private:
  std::map<std::string, std::vector<double>> rows_;
};

// Feature keys that fire for a context: the longest history context the
// parameters know (trigram, bigram, unigram backoff), plus role and gap
// features conjoined with the previous token.
std::vector<std::string> ActiveFeatures(const PolicyParams& params, const TokenContext& context);

struct TokenDistribution {
  std::vector<TokenId> tokens;
  std::vector<double> probs;

  double ProbOf(TokenId t) const;
};

// Softmax over CandidateTokens (masked) or GrammarTokens (unmasked).
TokenDistribution NextTokenDistribution(const PolicyParams& params, const TokenContext& context,
                                        bool apply_masks = true);

// Log-weight standing in for log(0) at zero smoothing; exp() of it
// underflows to exactly 0 relative to any seen continuation.
inline constexpr double kLogZero = -1000.0;

// Maximum likelihood fit: the trigram-context rows hold Laplace-smoothed log
// relative frequencies, so at zero smoothing the conditionals reproduce the
// empirical order-3 frequencies. Bigram and unigram rows serve as backoff
// for unseen histories. Throws on an empty corpus.
PolicyParams MleFit(std::span<const Trajectory> sequences, double smoothing);

// Mean negative log-likelihood per step, unmasked.
double MeanNegativeLogLikelihood(const PolicyParams& params, std::span<const Trajectory> sequences);

// Per-step contexts for the acts spoken by `perspective` in a dialogue.
Trajectory DialogueSteps(const Scenario& scenario, std::span<const DialogueEvent> events,
                         std::span<const CoarseDialogueAct> acts, Role perspective);

// History context for the act following events[0, n) when `self` speaks.
// Masks are left empty.
TokenContext HistoryContext(const Scenario& scenario, std::span<const DialogueEvent> events,
                            std::span<const CoarseDialogueAct> acts, Role self);

// HistoryContext plus the emission masks for the live dialogue.
TokenContext ContextForNextAct(const DialogueState& state, Role self);

// Intents that `self` can sensibly produce next: only accept / reject / quit
// while a partner offer is pending; otherwise no accept / reject, greet only
// in the first two events, counter only once the partner has proposed, and
// inform only (and unknown never) right after a partner inquire.
std::vector<Intent> ContextValidIntents(const DialogueState& state, Role self);

// Relabels an act the way the parser would read its realization in context:
// propose and counter by whether the argument differs from the partner's
// latest proposal, a late greet as unknown, unknown after an inquire as
// inform and inform without one as unknown.
CoarseDialogueAct CanonicalizeAct(const CoarseDialogueAct& act, const DialogueState& state,
                                  Role self);

enum class DecodeMode { kSample, kGreedy };

inline constexpr int kMaxActTokens = 4;

struct EmittedAct {
  CoarseDialogueAct act;
  std::vector<TokenId> tokens;
  Trajectory steps;
  // Set when the emitted tokens did not form a valid act and were replaced
  // by unknown.
  bool repaired = false;
};

// Emits one act token by token until </s> or kMaxActTokens. Greedy mode
// takes the argmax with the lowest token id on ties.
EmittedAct EmitAct(const PolicyParams& params, const TokenContext& context,
                   const Scenario& scenario, Rng& rng, DecodeMode mode);

// Sum of log p(token | context) over the steps. Throws on a zero-probability
// step.
double TrajectoryLogProb(const PolicyParams& params, const Trajectory& trajectory);

using Gradient = std::map<std::string, std::map<TokenId, double>>;

// d/dw of TrajectoryLogProb for every weight that has non-zero derivative.
Gradient TrajectoryLogProbGradient(const PolicyParams& params, const Trajectory& trajectory);

struct TrainerConfig {
  double learning_rate = 0.001;
  int episodes = 5000;
  std::uint64_t seed = 0;
};

// Running mean of returns, starting at zero.
struct Baseline {
  double value = 0;
  long count = 0;
  void Observe(double reward) {
    ++count;
    value += (reward - value) / static_cast<double>(count);
  }
};

struct ReinforceResult {
  bool applied = false;
  double advantage = 0;
};

// theta += lr * (r - b) * grad log p(trajectory), i.e. ascent on expected
// reward; the baseline then absorbs r. A non-finite gradient leaves the
// parameters untouched and throws.
ReinforceResult ReinforceUpdate(PolicyParams& params, const Trajectory& trajectory, double reward,
                                Baseline& baseline, const TrainerConfig& config);

// Same, for several trajectories of one episode sharing a reward.
ReinforceResult ReinforceUpdate(PolicyParams& params, std::span<const Trajectory> trajectories,
                                double reward, Baseline& baseline, const TrainerConfig& config);

}  // namespace haggle

#endif  // HAGGLE_POLICY_H_
