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

#ifndef HAGGLE_CONFIG_H_
#define HAGGLE_CONFIG_H_

#include <cstdint>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "haggle/generator.h"
#include "haggle/hybrid.h"
#include "haggle/policy.h"
#include "haggle/simulator.h"

namespace haggle {

// Run configuration file:
//   {"trainer": {"learning_rate", "episodes", "seed"},
//    "generator": {"top_k", "smoothing", "length_normalize"},
//    "episode": {"max_turns", "seed"},
//    "hybrid": {"seller_bottomline_fraction", "offer_deadline", "dn_target"}}
// Every section and key is optional; unknown keys are rejected.
struct RunConfig {
  TrainerConfig trainer;
  GeneratorConfig generator;
  EpisodeConfig episode;
  HybridConfig hybrid;

  // Sets every seed in the configuration.
  void SetSeed(std::uint64_t seed);
  void Validate() const;

  nlohmann::json ToJson() const;
  static RunConfig FromJson(const nlohmann::json& j);
  static RunConfig Load(const std::filesystem::path& path);
};

}  // namespace haggle

#endif  // HAGGLE_CONFIG_H_
