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

#include <string>
#include <vector>

#include "gsn/config.h"
#include "gsn/corpus.h"
#include "gsn/index.h"
#include "gsn/trainer.h"

namespace gsn::cli {

// Featurized train / validation / test pairs over one shared vocabulary.
struct Dataset {
  train::Vocabulary vocab;
  std::vector<train::EncodedPair> train;
  std::vector<train::EncodedPair> validation;
  std::vector<train::EncodedPair> test;
  std::vector<std::pair<std::string, std::string>> skipped;
};

// Builds graphs for all three splits and a vocabulary from the training
// split. Throws graph::FormatError when a split ends up empty.
Dataset MakeDataset(const std::vector<train::CorpusRecord>& train,
                    const std::vector<train::CorpusRecord>& validation,
                    const std::vector<train::CorpusRecord>& test,
                    const std::filesystem::path& base_dir,
                    const graph::RelationSet& relations, const Config& config);

struct ExperimentResult {
  retrieval::Metrics metrics;
  int epochs = 0;
  int best_epoch = 0;
  double first_loss = 0.0;
  double last_loss = 0.0;
  double seconds = 0.0;
};

// Trains from a fresh model seeded by config.train.seed and evaluates the
// best checkpoint on the test split.
ExperimentResult RunExperiment(const Config& config, const Dataset& data);

// "1..5" or "1,2,4,8".
std::vector<int> ParseValueList(const std::string& text);

// Copy of `config` with the named sweep parameter (hops, heads or dim) set.
Config WithSweepValue(const Config& config, const std::string& param,
                      int value);

}  // namespace gsn::cli
