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
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gsn/code_graph.h"

namespace gsn::graph {

struct DepToken {
  std::string form;
  int head = 0;  // 1-based within the sentence; 0 marks the root
  std::string relation;
};

struct DepSentence {
  std::vector<DepToken> tokens;
};

// Reads ID, FORM, HEAD and DEPREL from 10-column CoNLL-U. Comment lines,
// multiword ranges and empty nodes are skipped. Throws FormatError.
std::vector<DepSentence> ParseConllu(std::string_view text);
std::vector<DepSentence> ReadConlluFile(const std::filesystem::path& path);

// Runs of letters, digits and underscores, case preserved.
std::vector<std::string> TokenizeText(std::string_view text);

// Parser-free fallback: token i depends on token i-1 with label "dep"; the
// first token is the root.
DepSentence LinearParse(std::string_view text);

// Dependency relation vocabulary. Labels are compared lowercased with any
// ":subtype" suffix removed; anything else maps to "dep".
class RelationSet {
 public:
  // The 49 labels shipped in data/relations.txt.
  static RelationSet Default();
  // One relation per line; blank lines and "#" comments ignored.
  static RelationSet FromFile(const std::filesystem::path& path);
  explicit RelationSet(std::vector<std::string> names);

  std::string Normalize(std::string_view label) const;
  bool Contains(std::string_view label) const;
  const std::set<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }

 private:
  std::set<std::string> names_;
};

struct SummaryNode {
  int id = 0;
  std::string label;
  bool is_subtoken = false;
  int sentence = 0;
  // Originating token for subtoken nodes.
  int origin = -1;
};

struct SummaryEdge {
  int src = 0;
  int dst = 0;
  std::string label;  // a relation name, "NextToken" or "SubToken"
  auto operator<=>(const SummaryEdge&) const = default;
};

struct SummaryGraph {
  std::vector<SummaryNode> nodes;  // tokens first, then subtoken nodes
  std::vector<SummaryEdge> edges;
  std::size_t node_cap = kDefaultNodeCap;
  // Labels replaced by "dep" because the relation set lacked them.
  std::size_t unknown_relations = 0;

  std::size_t token_count() const;
  std::vector<int> TokenSequence() const;
  std::string Dump() const;
};

// Dependency edges run dependent -> head. Token labels are lowercased.
SummaryGraph BuildSummaryGraph(const std::vector<DepSentence>& sentences,
                               const RelationSet& relations,
                               std::size_t node_cap = kDefaultNodeCap);

// Convenience: linear parse of plain text.
SummaryGraph BuildSummaryGraph(std::string_view text,
                               const RelationSet& relations,
                               std::size_t node_cap = kDefaultNodeCap);

}  // namespace gsn::graph
