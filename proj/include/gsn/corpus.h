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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gsn/code_graph.h"
#include "gsn/encoders.h"
#include "gsn/summary_graph.h"
#include "gsn/vocab.h"

namespace gsn::train {

// One line of the corpus file. Each side is given inline or by reference to
// a file (resolved relative to the corpus file's directory):
//   {"id": "...", "code": "<MiniLang source>" | "code_ast": "<NODE file>",
//    "docstring": "<text>" | "docstring_conllu": "<CoNLL-U file>"}
struct CorpusRecord {
  std::string id;
  std::string code;
  std::string code_ast;
  std::string docstring;
  std::string docstring_conllu;
};

std::vector<CorpusRecord> ReadCorpus(const std::filesystem::path& path);
void WriteCorpus(const std::filesystem::path& path,
                 const std::vector<CorpusRecord>& records);

struct GraphOptions {
  std::size_t node_cap = graph::kDefaultNodeCap;
  // Feed subtoken nodes to attention after their terminal.
  bool attention_subtokens = false;
};

struct Example {
  std::string id;
  graph::ProgramGraph code;
  graph::SummaryGraph summary;
};

graph::ProgramGraph BuildCodeGraph(const CorpusRecord& record,
                                   const std::filesystem::path& base_dir,
                                   const GraphOptions& options);
graph::SummaryGraph BuildDocGraph(const CorpusRecord& record,
                                  const std::filesystem::path& base_dir,
                                  const graph::RelationSet& relations,
                                  const GraphOptions& options);

struct LoadReport {
  std::vector<Example> examples;
  // (record id, error message) for records whose graphs failed to build.
  std::vector<std::pair<std::string, std::string>> skipped;
};

LoadReport BuildExamples(const std::vector<CorpusRecord>& records,
                         const std::filesystem::path& base_dir,
                         const graph::RelationSet& relations,
                         const GraphOptions& options);

// Node labels of both graphs, the token streams the vocabulary counts.
std::vector<std::string> Labels(const graph::ProgramGraph& g);
std::vector<std::string> Labels(const graph::SummaryGraph& g);

nn::GraphInput Featurize(const graph::ProgramGraph& g, const Vocabulary& vocab,
                         bool attention_subtokens);
nn::GraphInput Featurize(const graph::SummaryGraph& g,
                         const Vocabulary& vocab);

struct EncodedPair {
  std::string id;
  nn::GraphInput code;
  nn::GraphInput summary;
};

std::vector<EncodedPair> FeaturizeAll(const std::vector<Example>& examples,
                                      const Vocabulary& vocab,
                                      const GraphOptions& options);

Vocabulary BuildVocabulary(const std::vector<Example>& examples,
                           std::size_t max_size);

// Seeded generator of (MiniLang program, summary) pairs whose summaries
// describe what the programs do.
std::vector<CorpusRecord> SyntheticCorpus(std::size_t count,
                                          std::uint64_t seed);

}  // namespace gsn::train
