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

#ifndef HAGGLE_GENERATOR_H_
#define HAGGLE_GENERATOR_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "haggle/parser.h"
#include "haggle/rng.h"
#include "haggle/types.h"

namespace haggle {

inline constexpr std::string_view kPricePlaceholder = "[price]";
inline constexpr std::string_view kSplitPlaceholder = "[split]";

// A delexicalized utterance. Tokens keep their original case; argument
// spans are replaced by kPricePlaceholder / kSplitPlaceholder.
struct Template {
  std::vector<std::string> tokens;
  std::string source_id;
  // False when the act had an argument but no span for it was found.
  bool lexicalizable = true;

  std::string Text() const;
  int NumPlaceholders() const;
  // Lowercased tokens, used for TF-IDF terms and LM scoring.
  std::vector<std::string> Terms() const;

  bool operator==(const Template&) const = default;
};

Template ExtractTemplate(std::string_view utterance, const CoarseDialogueAct& act,
                         const Scenario& scenario, const PriceLexicon& lexicon,
                         std::string source_id = {});

// Pseudo-token standing for a structural event in a retrieval context.
std::string StructuralContextToken(EventKind kind);

struct Candidate {
  Template context_template;
  CoarseDialogueAct context_act;
  Template response_template;
  CoarseDialogueAct response_act;

  bool operator==(const Candidate&) const = default;
};

// Laplace-smoothed word trigram model. The vocabulary holds every training
// word plus <s>, </s> and <unk>.
class TrigramLM {
 public:
  static TrigramLM Fit(std::span<const std::vector<std::string>> sentences, double smoothing);

  double smoothing() const { return smoothing_; }
  std::size_t vocab_size() const { return vocab_.size(); }
  const std::vector<std::string>& vocab() const { return vocab_; }

  // log p(w | u, v); out-of-vocabulary words map to <unk>.
  double LogProb(const std::string& u, const std::string& v, const std::string& w) const;
  // Mean log-probability over the words and the closing </s>, or the sum
  // when normalize is false.
  double Score(std::span<const std::string> words, bool normalize = true) const;

 private:
  const std::string& Map(const std::string& w) const;

  double smoothing_ = 0.1;
  std::vector<std::string> vocab_;
  std::map<std::tuple<std::string, std::string, std::string>, double> trigram_;
  std::map<std::pair<std::string, std::string>, double> context_;
};

using SparseVector = std::map<std::string, double>;

// Dot product over shared terms.
double Similarity(const SparseVector& a, const SparseVector& b);

struct GeneratorConfig {
  int top_k = 10;
  double smoothing = 0.1;
  bool length_normalize = true;
};

struct RankedCandidate {
  std::size_t index;
  double similarity;
};

// Candidates from adjacent (context, response) pairs whose response is a
// message, the idf table over their contexts, and an LM over responses.
class RetrievalIndex {
 public:
  static constexpr int kFormatVersion = 1;

  RetrievalIndex() = default;
  RetrievalIndex(std::vector<Candidate> candidates, double smoothing);

  const std::vector<Candidate>& candidates() const { return candidates_; }
  const std::map<std::string, double>& idf() const { return idf_; }
  const TrigramLM& lm() const { return lm_; }
  bool empty() const { return candidates_.empty(); }

  SparseVector Vectorize(const Template& t) const;
  const SparseVector& ContextVector(std::size_t i) const { return context_vectors_[i]; }

  // Candidates whose response intent is z_t and context intent is z_{t-1},
  // falling back to z_t alone; by similarity, then index. Argument-taking
  // intents skip non-lexicalizable responses. Throws "no candidates for
  // intent" if nothing matches.
  std::vector<RankedCandidate> Retrieve(Intent response_intent,
                                        std::optional<Intent> context_intent,
                                        const Template& context) const;

  nlohmann::json ToJson() const;
  static RetrievalIndex FromJson(const nlohmann::json& j);

 private:
  std::vector<Candidate> candidates_;
  std::map<std::string, double> idf_;
  std::vector<SparseVector> context_vectors_;
  TrigramLM lm_;
};

RetrievalIndex BuildIndex(std::span<const ParsedDialogue> corpus, const PriceLexicon& lexicon,
                          double smoothing = 0.1);

// Draws one of the top-K ranked candidates with probability proportional to
// exp(LM score of its response). Returns the candidate index.
std::size_t SampleResponse(std::span<const RankedCandidate> ranked, const RetrievalIndex& index,
                           const GeneratorConfig& config, Rng& rng);

// "i take 1 book and 2 hats , you take 1 ball" from the speaker's side.
std::string SplitPhrase(const Split& split, const DNScenario& scenario, Role speaker);

// Fills placeholders from the act. Throws on a placeholder / argument
// mismatch.
std::string Lexicalize(const Template& t, const CoarseDialogueAct& act, const Scenario& scenario,
                       Role speaker);

struct Realization {
  std::string text;
  // The act the text parses to: the requested act relabeled for context.
  CoarseDialogueAct act;
  std::optional<std::size_t> candidate;
  // Candidates drawn, including the accepted one.
  int attempts = 0;
  // Set when no retrieved candidate re-parsed to the act and a built-in
  // utterance was used instead.
  bool fallback = false;
};

// Realizes `act` as the next message of `speaker`: retrieves, samples and
// lexicalizes candidates until one re-parses to the act in context.
Realization Realize(const RetrievalIndex& index, const Parser& parser,
                    const CoarseDialogueAct& act, const DialogueState& state, Role speaker,
                    const GeneratorConfig& config, Rng& rng);

}  // namespace haggle

#endif  // HAGGLE_GENERATOR_H_
