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

#ifndef HAGGLE_CORPUS_H_
#define HAGGLE_CORPUS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "haggle/parser.h"
#include "haggle/rng.h"
#include "haggle/types.h"

namespace haggle {

struct DialogueRecord {
  std::string id;
  Scenario scenario;
  std::vector<DialogueEvent> events;
  std::optional<Outcome> outcome;

  bool operator==(const DialogueRecord& other) const;
};

enum class CorpusFormat { kCanonical, kCocoaImport };

CorpusFormat ParseCorpusFormat(std::string_view name);

struct LoadReport {
  int records_read = 0;
  int records_loaded = 0;
  int records_skipped = 0;
  std::vector<std::string> messages;
};

// Canonical corpus: a JSON array of {"id"?, "scenario", "events",
// "outcome"?}. Records missing an id get "dialogue-<index>". Events are
// replayed through DialogueState, so alternation and the offer lifecycle
// are enforced. Throws SchemaError naming the record index.
std::vector<DialogueRecord> CorpusFromJson(const nlohmann::json& j);
nlohmann::json CorpusToJson(std::span<const DialogueRecord> records);

// Importer for the public bargaining dataset's JSON: kbs[i].personal.Role
// and Target, kbs[i].item.{Category, Title, Description, Price}, events
// with action / agent / data, outcome.offer. Unusable records are skipped
// and reported. Speaker alternation is not enforced.
std::vector<DialogueRecord> ImportCocoa(const nlohmann::json& j, LoadReport* report = nullptr);

std::vector<DialogueRecord> LoadCorpus(const std::filesystem::path& path, CorpusFormat format,
                                       LoadReport* report = nullptr);
void SaveCorpus(const std::filesystem::path& path, std::span<const DialogueRecord> records);

struct Posting {
  std::string category;
  std::string title;
  std::string description;
  Money listing_price;
};

inline constexpr std::array<double, 3> kTargetMultipliers = {0.5, 0.7, 0.9};

// One scenario per multiplier, buyer target = multiplier x listing in cents.
std::vector<CBScenario> GenerateScenarios(const Posting& posting,
                                          std::span<const double> multipliers = kTargetMultipliers);

inline constexpr std::array<std::string_view, 6> kCategories = {
    "housing", "furniture", "car", "bike", "phone", "electronics"};

// Deterministic postings, categories assigned round-robin.
std::vector<Posting> SynthPostings(std::uint64_t seed, int n);

// Random DN scenario: counts in [1, 4] with 5 to 7 items, each side's
// values dotting to 10.
DNScenario SynthDnScenario(Rng& rng);

// Scripted human-like dialogues rendered from phrase banks.
DialogueRecord SynthCbDialogue(const CBScenario& scenario, std::string id, Rng& rng);
DialogueRecord SynthDnDialogue(const DNScenario& scenario, std::string id, Rng& rng);

// n dialogues of the task from `seed`.
std::vector<DialogueRecord> SynthCorpus(Task task, int n, std::uint64_t seed);

struct CorpusStats {
  int num_dialogues = 0;
  double avg_turns = 0;
  double avg_tokens_per_turn = 0;
  int vocab_size = 0;
  int vocab_size_excluding_numbers = 0;

  nlohmann::json ToJson() const;
};

// Turns are events. Tokens per turn average over message events. The
// vocabulary holds lowercased word and number tokens.
CorpusStats ComputeCorpusStats(std::span<const DialogueRecord> records);

// Message texts, for building the price lexicon.
std::vector<std::string> Utterances(std::span<const DialogueRecord> records);

std::vector<ParsedDialogue> ParseCorpus(std::span<const DialogueRecord> records,
                                        const Parser& parser);

// Parsed corpus as JSON lines: one {"id", "scenario", "events", "acts"}
// object per line, byte-stable.
std::string ExportParsed(std::span<const DialogueRecord> records, const Parser& parser);
std::string ParsedToJsonLines(std::span<const ParsedDialogue> parsed);
std::vector<ParsedDialogue> ParsedFromJsonLines(std::string_view text);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view content);

}  // namespace haggle

#endif  // HAGGLE_CORPUS_H_
