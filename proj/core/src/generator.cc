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

#include "haggle/generator.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <utility>

#include "haggle/error.h"
#include "haggle/json_io.h"
#include "haggle/policy.h"
#include "haggle/pricing.h"
#include "haggle/tokenizer.h"

namespace haggle {
namespace {

constexpr std::string_view kBos = "<s>";
constexpr std::string_view kEos = "</s>";
constexpr std::string_view kUnk = "<unk>";

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool IsPlaceholder(std::string_view t) { return t == kPricePlaceholder || t == kSplitPlaceholder; }

Template ContextTemplate(const DialogueEvent& event, const CoarseDialogueAct& act,
                         const Scenario& scenario, const PriceLexicon& lexicon) {
  if (event.kind != EventKind::kMessage) return {{StructuralContextToken(event.kind)}, {}, true};
  return ExtractTemplate(event.text.value_or(""), act, scenario, lexicon);
}

bool SameArgument(const CoarseDialogueAct& a, const CoarseDialogueAct& b, const Scenario& scenario,
                  Role speaker) {
  if (a.price.has_value() != b.price.has_value() || a.split.has_value() != b.split.has_value()) {
    return false;
  }
  if (a.price) {
    const auto& cb = std::get<CBScenario>(scenario);
    return PriceToBin(speaker, cb, *a.price) == PriceToBin(speaker, cb, *b.price);
  }
  if (a.split) {
    const auto& counts = std::get<DNScenario>(scenario).counts;
    return a.split->Completed(counts) == b.split->Completed(counts);
  }
  return true;
}

std::string CannedTemplate(Intent intent, Task task) {
  const bool cb = task == Task::kCraigslist;
  switch (intent) {
    case Intent::kGreet: return "hi there !";
    case Intent::kInquire: return cb ? "is it still available ?" : "what do you need ?";
    case Intent::kInform: return cb ? "it is in great shape ." : "that is what matters to me .";
    case Intent::kPropose:
    case Intent::kCounter: return cb ? "how about [price] ?" : "how about [split] ?";
    case Intent::kAgree: return "sounds good .";
    case Intent::kDisagree: return "no , i can't do that .";
    default: return "hmm .";
  }
}

Template TemplateFromText(const std::string& text) {
  Template t;
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t j = std::min(text.find(' ', i), text.size());
    if (j > i) t.tokens.push_back(text.substr(i, j - i));
    i = j + 1;
  }
  return t;
}

nlohmann::json TemplateToJson(const Template& t) {
  nlohmann::json j = {{"tokens", t.tokens}, {"source_id", t.source_id}};
  if (!t.lexicalizable) j["lexicalizable"] = false;
  return j;
}

Template TemplateFromJson(const nlohmann::json& j) {
  Template t;
  t.tokens = j.at("tokens").get<std::vector<std::string>>();
  t.source_id = j.at("source_id").get<std::string>();
  t.lexicalizable = j.value("lexicalizable", true);
  return t;
}

}  // namespace

std::string Template::Text() const {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

int Template::NumPlaceholders() const {
  return static_cast<int>(std::count_if(tokens.begin(), tokens.end(), IsPlaceholder));
}

std::vector<std::string> Template::Terms() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(Lower(t));
  return out;
}

Template ExtractTemplate(std::string_view utterance, const CoarseDialogueAct& act,
                         const Scenario& scenario, const PriceLexicon& lexicon,
                         std::string source_id) {
  const std::vector<Token> tokens = Tokenize(utterance);
  Template out;
  out.source_id = std::move(source_id);
  for (const Token& t : tokens) out.tokens.emplace_back(t.Original(utterance));

  if (act.price) {
    const auto* cb = std::get_if<CBScenario>(&scenario);
    std::optional<std::size_t> at;
    if (cb) {
      for (const auto& d : DetectPrices(tokens, *cb, lexicon)) {
        if (d.price == *act.price) at = d.token_index;
      }
    }
    if (at) {
      out.tokens[*at] = std::string(kPricePlaceholder);
    } else {
      out.lexicalizable = false;
    }
  } else if (act.split) {
    const auto indices = SplitTokenIndices(tokens);
    if (indices.empty()) {
      out.lexicalizable = false;
    } else {
      const auto [lo, hi] = std::minmax_element(indices.begin(), indices.end());
      out.tokens.erase(out.tokens.begin() + static_cast<std::ptrdiff_t>(*lo) + 1,
                       out.tokens.begin() + static_cast<std::ptrdiff_t>(*hi) + 1);
      out.tokens[*lo] = std::string(kSplitPlaceholder);
    }
  }
  return out;
}

std::string StructuralContextToken(EventKind kind) {
  return "<" + std::string(EventKindName(kind)) + ">";
}

TrigramLM TrigramLM::Fit(std::span<const std::vector<std::string>> sentences, double smoothing) {
  if (!(smoothing > 0) || !std::isfinite(smoothing)) {
    throw HaggleError("LM smoothing must be positive");
  }
  TrigramLM lm;
  lm.smoothing_ = smoothing;
  std::set<std::string> vocab = {std::string(kBos), std::string(kEos), std::string(kUnk)};
  for (const auto& s : sentences) {
    std::string u(kBos), v(kBos);
    for (std::size_t i = 0; i <= s.size(); ++i) {
      const std::string w = i < s.size() ? s[i] : std::string(kEos);
      vocab.insert(w);
      lm.trigram_[{u, v, w}] += 1;
      lm.context_[{u, v}] += 1;
      u = v;
      v = w;
    }
  }
  lm.vocab_.assign(vocab.begin(), vocab.end());
  return lm;
}

const std::string& TrigramLM::Map(const std::string& w) const {
  static const std::string unk(kUnk);
  return std::binary_search(vocab_.begin(), vocab_.end(), w) ? w : unk;
}

double TrigramLM::LogProb(const std::string& u, const std::string& v, const std::string& w) const {
  const std::string& a = Map(u);
  const std::string& b = Map(v);
  const std::string& c = Map(w);
  const auto t = trigram_.find({a, b, c});
  const auto ctx = context_.find({a, b});
  const double num = (t == trigram_.end() ? 0.0 : t->second) + smoothing_;
  const double den = (ctx == context_.end() ? 0.0 : ctx->second) +
                     smoothing_ * static_cast<double>(vocab_.size());
  return std::log(num / den);
}

double TrigramLM::Score(std::span<const std::string> words, bool normalize) const {
  std::string u(kBos), v(kBos);
  double total = 0;
  for (std::size_t i = 0; i <= words.size(); ++i) {
    const std::string w = i < words.size() ? words[i] : std::string(kEos);
    total += LogProb(u, v, w);
    u = v;
    v = w;
  }
  return normalize ? total / static_cast<double>(words.size() + 1) : total;
}

double Similarity(const SparseVector& a, const SparseVector& b) {
  const SparseVector& small = a.size() <= b.size() ? a : b;
  const SparseVector& large = a.size() <= b.size() ? b : a;
  double total = 0;
  for (const auto& [term, w] : small) {
    if (const auto it = large.find(term); it != large.end()) total += w * it->second;
  }
  return total;
}

RetrievalIndex::RetrievalIndex(std::vector<Candidate> candidates, double smoothing)
    : candidates_(std::move(candidates)) {
  const double n = static_cast<double>(candidates_.size());
  std::map<std::string, double> df;
  std::vector<std::vector<std::string>> responses;
  for (const auto& c : candidates_) {
    const auto terms = c.context_template.Terms();
    for (const auto& term : std::set<std::string>(terms.begin(), terms.end())) df[term] += 1;
    responses.push_back(c.response_template.Terms());
  }
  for (const auto& [term, d] : df) idf_[term] = std::log(n / d);
  context_vectors_.reserve(candidates_.size());
  for (const auto& c : candidates_) context_vectors_.push_back(Vectorize(c.context_template));
  lm_ = TrigramLM::Fit(responses, smoothing);
}

SparseVector RetrievalIndex::Vectorize(const Template& t) const {
  SparseVector v;
  for (const auto& term : t.Terms()) {
    const auto it = idf_.find(term);
    if (it != idf_.end() && it->second != 0.0) v[term] += it->second;
  }
  return v;
}

std::vector<RankedCandidate> RetrievalIndex::Retrieve(Intent response_intent,
                                                      std::optional<Intent> context_intent,
                                                      const Template& context) const {
  const bool needs_argument = TakesArgument(response_intent);
  const auto usable = [&](const Candidate& c) {
    return c.response_act.intent == response_intent &&
           (!needs_argument || c.response_template.lexicalizable);
  };
  std::vector<std::size_t> matches;
  if (context_intent) {
    for (std::size_t i = 0; i < candidates_.size(); ++i) {
      if (usable(candidates_[i]) && candidates_[i].context_act.intent == *context_intent) {
        matches.push_back(i);
      }
    }
  }
  if (matches.empty()) {
    for (std::size_t i = 0; i < candidates_.size(); ++i) {
      if (usable(candidates_[i])) matches.push_back(i);
    }
  }
  if (matches.empty()) {
    throw HaggleError("no candidates for intent " + std::string(IntentName(response_intent)));
  }
  const SparseVector query = Vectorize(context);
  std::vector<RankedCandidate> ranked;
  ranked.reserve(matches.size());
  for (const std::size_t i : matches) ranked.push_back({i, Similarity(query, context_vectors_[i])});
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedCandidate& a, const RankedCandidate& b) {
                     return a.similarity > b.similarity;
                   });
  return ranked;
}

nlohmann::json RetrievalIndex::ToJson() const {
  nlohmann::json cands = nlohmann::json::array();
  for (const auto& c : candidates_) {
    cands.push_back({{"context", TemplateToJson(c.context_template)},
                     {"context_act", ActToJson(c.context_act)},
                     {"response", TemplateToJson(c.response_template)},
                     {"response_act", ActToJson(c.response_act)}});
  }
  return {{"format", "haggle-retrieval-index"},
          {"version", kFormatVersion},
          {"smoothing", lm_.smoothing()},
          {"candidates", cands}};
}

RetrievalIndex RetrievalIndex::FromJson(const nlohmann::json& j) {
  if (!j.is_object() || j.value("format", "") != "haggle-retrieval-index") {
    throw SchemaError("not a retrieval index document");
  }
  if (j.value("version", 0) != kFormatVersion) throw SchemaError("unsupported index version");
  std::vector<Candidate> cands;
  try {
    for (const auto& c : j.at("candidates")) {
      cands.push_back({TemplateFromJson(c.at("context")), ActFromJson(c.at("context_act")),
                       TemplateFromJson(c.at("response")), ActFromJson(c.at("response_act"))});
    }
    return RetrievalIndex(std::move(cands), j.at("smoothing").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("bad retrieval index: ") + e.what());
  }
}

RetrievalIndex BuildIndex(std::span<const ParsedDialogue> corpus, const PriceLexicon& lexicon,
                          double smoothing) {
  std::vector<Candidate> cands;
  for (const auto& d : corpus) {
    for (std::size_t t = 1; t < d.events.size(); ++t) {
      const auto& e = d.events[t];
      if (e.kind != EventKind::kMessage || !e.text) continue;
      const std::string source = d.id + ":" + std::to_string(t);
      Template context = ContextTemplate(d.events[t - 1], d.acts[t - 1], d.scenario, lexicon);
      context.source_id = d.id + ":" + std::to_string(t - 1);
      cands.push_back({std::move(context), d.acts[t - 1],
                       ExtractTemplate(*e.text, d.acts[t], d.scenario, lexicon, source),
                       d.acts[t]});
    }
  }
  return RetrievalIndex(std::move(cands), smoothing);
}

std::size_t SampleResponse(std::span<const RankedCandidate> ranked, const RetrievalIndex& index,
                           const GeneratorConfig& config, Rng& rng) {
  if (ranked.empty()) throw HaggleError("no candidates to sample from");
  if (config.top_k < 1) throw HaggleError("top_k must be at least 1");
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(config.top_k), ranked.size());
  std::vector<double> scores(k);
  for (std::size_t i = 0; i < k; ++i) {
    scores[i] = index.lm().Score(index.candidates()[ranked[i].index].response_template.Terms(),
                                 config.length_normalize);
  }
  const double top = *std::max_element(scores.begin(), scores.end());
  for (double& s : scores) s = std::exp(s - top);
  return ranked[rng.Categorical(scores)].index;
}

std::string SplitPhrase(const Split& split, const DNScenario& scenario, Role speaker) {
  const int own = Slot(speaker);
  const auto clause = [&](int slot, std::string_view who) {
    std::string out;
    for (int i = 0; i < kNumItems; ++i) {
      const auto& v = split.allocation[slot][i];
      if (!v || *v <= 0) continue;
      out += out.empty() ? std::string(who) + " take " : " and ";
      out += std::to_string(*v) + " " + std::string(ItemName(kAllItems[i])) + (*v == 1 ? "" : "s");
    }
    return out;
  };
  (void)scenario;
  const std::string mine = clause(own, "i");
  const std::string yours = clause(1 - own, "you");
  if (mine.empty()) return yours;
  if (yours.empty()) return mine;
  return mine + " , " + yours;
}

std::string Lexicalize(const Template& t, const CoarseDialogueAct& act, const Scenario& scenario,
                       Role speaker) {
  std::string out;
  int filled = 0;
  for (const auto& token : t.tokens) {
    std::string word = token;
    if (token == kPricePlaceholder) {
      if (!act.price) throw HaggleError("template has a price slot but the act has no price");
      word = act.price->ToPriceText();
      ++filled;
    } else if (token == kSplitPlaceholder) {
      if (!act.split) throw HaggleError("template has a split slot but the act has no split");
      word = SplitPhrase(*act.split, std::get<DNScenario>(scenario), speaker);
      ++filled;
    }
    if (!out.empty()) out += ' ';
    out += word;
  }
  if ((act.price || act.split) && filled == 0) {
    throw HaggleError("act argument has no placeholder in the template");
  }
  return out;
}

Realization Realize(const RetrievalIndex& index, const Parser& parser,
                    const CoarseDialogueAct& act, const DialogueState& state, Role speaker,
                    const GeneratorConfig& config, Rng& rng) {
  Realization out;
  out.act = CanonicalizeAct(act, state, speaker);
  if (IsStructural(out.act.intent)) {
    throw HaggleError("structural acts are not realized as text");
  }
  const Scenario& scenario = state.scenario();
  const ParseContext context = ParseContext::ForNextEvent(state, speaker);
  const auto faithful = [&](const std::string& text) {
    const CoarseDialogueAct parsed = parser.ParseMessage(text, context);
    return parsed.intent == out.act.intent && SameArgument(parsed, out.act, scenario, speaker);
  };

  std::optional<Intent> context_intent;
  Template context_template;
  if (!state.events().empty()) {
    context_intent = state.acts().back().intent;
    context_template =
        ContextTemplate(state.events().back(), state.acts().back(), scenario, parser.lexicon());
  }

  std::vector<RankedCandidate> ranked;
  if (!index.empty()) {
    try {
      ranked = index.Retrieve(out.act.intent, context_intent, context_template);
    } catch (const HaggleError&) {
      ranked.clear();
    }
  }
  const int max_attempts = 3 * std::max(config.top_k, 1);
  for (int attempt = 0; attempt < max_attempts && !ranked.empty(); ++attempt) {
    const std::size_t pick = SampleResponse(ranked, index, config, rng);
    ++out.attempts;
    std::erase_if(ranked, [&](const RankedCandidate& r) { return r.index == pick; });
    const Template& t = index.candidates()[pick].response_template;
    if (t.NumPlaceholders() != ((out.act.price || out.act.split) ? 1 : 0)) continue;
    std::string text;
    try {
      text = Lexicalize(t, out.act, scenario, speaker);
    } catch (const HaggleError&) {
      continue;
    }
    if (faithful(text)) {
      out.text = std::move(text);
      out.candidate = pick;
      return out;
    }
  }
  out.fallback = true;
  out.text = Lexicalize(TemplateFromText(CannedTemplate(out.act.intent, state.task())), out.act,
                        scenario, speaker);
  return out;
}

}  // namespace haggle
