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

#include "haggle/config.h"

#include <string>

#include "haggle/corpus.h"
#include "haggle/error.h"

namespace haggle {
namespace {

using nlohmann::json;

void CheckKeys(const json& j, const std::string& where, std::initializer_list<std::string_view> keys) {
  if (!j.is_object()) throw SchemaError("config: " + where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const auto k : keys) known = known || key == k;
    if (!known) throw SchemaError("config: unknown key '" + where + "." + key + "'");
  }
}

template <typename T>
void Read(const json& section, const char* key, T& out, const std::string& where) {
  const auto it = section.find(key);
  if (it == section.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw SchemaError("config: '" + where + "." + key + "' has the wrong type");
  }
}

}  // namespace

void RunConfig::SetSeed(std::uint64_t seed) {
  trainer.seed = seed;
  episode.seed = seed;
}

void RunConfig::Validate() const {
  if (!(trainer.learning_rate > 0)) throw SchemaError("config: learning_rate must be positive");
  if (trainer.episodes < 0) throw SchemaError("config: episodes must be non-negative");
  if (generator.top_k < 1) throw SchemaError("config: top_k must be at least 1");
  if (!(generator.smoothing > 0)) throw SchemaError("config: smoothing must be positive");
  if (episode.max_turns < 2) throw SchemaError("config: max_turns must be at least 2");
  if (!(hybrid.seller_bottomline_fraction > 0 && hybrid.seller_bottomline_fraction <= 1)) {
    throw SchemaError("config: seller_bottomline_fraction must be in (0, 1]");
  }
  if (hybrid.offer_deadline < 1) throw SchemaError("config: offer_deadline must be positive");
}

json RunConfig::ToJson() const {
  return {{"trainer",
           {{"learning_rate", trainer.learning_rate},
            {"episodes", trainer.episodes},
            {"seed", trainer.seed}}},
          {"generator",
           {{"top_k", generator.top_k},
            {"smoothing", generator.smoothing},
            {"length_normalize", generator.length_normalize}}},
          {"episode", {{"max_turns", episode.max_turns}, {"seed", episode.seed}}},
          {"hybrid",
           {{"seller_bottomline_fraction", hybrid.seller_bottomline_fraction},
            {"offer_deadline", hybrid.offer_deadline},
            {"dn_target", hybrid.dn_target}}}};
}

RunConfig RunConfig::FromJson(const json& j) {
  CheckKeys(j, "config", {"trainer", "generator", "episode", "hybrid"});
  RunConfig c;
  if (j.contains("trainer")) {
    const json& s = j["trainer"];
    CheckKeys(s, "trainer", {"learning_rate", "episodes", "seed"});
    Read(s, "learning_rate", c.trainer.learning_rate, "trainer");
    Read(s, "episodes", c.trainer.episodes, "trainer");
    Read(s, "seed", c.trainer.seed, "trainer");
  }
  if (j.contains("generator")) {
    const json& s = j["generator"];
    CheckKeys(s, "generator", {"top_k", "smoothing", "length_normalize"});
    Read(s, "top_k", c.generator.top_k, "generator");
    Read(s, "smoothing", c.generator.smoothing, "generator");
    Read(s, "length_normalize", c.generator.length_normalize, "generator");
  }
  if (j.contains("episode")) {
    const json& s = j["episode"];
    CheckKeys(s, "episode", {"max_turns", "seed"});
    Read(s, "max_turns", c.episode.max_turns, "episode");
    Read(s, "seed", c.episode.seed, "episode");
  }
  if (j.contains("hybrid")) {
    const json& s = j["hybrid"];
    CheckKeys(s, "hybrid", {"seller_bottomline_fraction", "offer_deadline", "dn_target"});
    Read(s, "seller_bottomline_fraction", c.hybrid.seller_bottomline_fraction, "hybrid");
    Read(s, "offer_deadline", c.hybrid.offer_deadline, "hybrid");
    Read(s, "dn_target", c.hybrid.dn_target, "hybrid");
  }
  c.Validate();
  return c;
}

RunConfig RunConfig::Load(const std::filesystem::path& path) {
  try {
    return FromJson(json::parse(ReadFile(path)));
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string() + ": invalid JSON: " + e.what());
  }
}

}  // namespace haggle
