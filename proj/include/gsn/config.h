// Copyright 2026 The gsn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gsn/corpus.h"
#include "gsn/index.h"
#include "gsn/model.h"
#include "gsn/trainer.h"

namespace gsn::cli {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Config {
  train::ModelConfig model;
  train::TrainConfig train;
  std::size_t node_cap = graph::kDefaultNodeCap;
  std::size_t vocab_size = 150000;
  bool attention_subtokens = false;
  retrieval::ScoreDisplay score_display = retrieval::ScoreDisplay::kRaw;
  std::string corpus;
  std::string validation_corpus;
  std::string test_corpus;
  std::string vocab;
  std::string checkpoint;
  std::string index;
  std::string relations;  // empty selects the built-in relation list

  train::GraphOptions graph_options() const {
    return {node_cap, attention_subtokens};
  }
  // Throws ConfigError when an invariant fails.
  void Validate() const;
};

// Applies one `key = value` setting; throws ConfigError for an unknown key
// or an unparsable value. Does not validate cross-field invariants.
void ApplySetting(Config& config, std::string_view key, std::string_view value);

// Flat `key = value` text with '#' comments; absent keys keep defaults.
Config ParseConfig(std::string_view text);
Config LoadConfig(const std::filesystem::path& path);

// Keys understood by ApplySetting, in documentation order.
const std::vector<std::string>& ConfigKeys();

}  // namespace gsn::cli
