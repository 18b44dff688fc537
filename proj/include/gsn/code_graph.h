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

#include <array>
#include <compare>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gsn::graph {

inline constexpr std::size_t kDefaultNodeCap = 200;

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& message, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Malformed input in one of the line-oriented interchange formats.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AstNode {
  int id = 0;
  std::string kind;
  // Token text for terminals, empty for non-terminals.
  std::string label;
  std::vector<int> children;
  int parent = -1;
  bool is_terminal = false;
  std::optional<int> token_index;
};

// A validated syntax tree with dense ids. `nodes[i].id == i`.
class Ast {
 public:
  Ast() = default;
  // Validates the tree shape; throws FormatError on any violation.
  explicit Ast(std::vector<AstNode> nodes);

  const std::vector<AstNode>& nodes() const { return nodes_; }
  const AstNode& node(int id) const { return nodes_.at(id); }
  int root() const { return root_; }
  std::size_t size() const { return nodes_.size(); }
  // Terminal ids ordered by token index.
  const std::vector<int>& terminals() const { return terminals_; }

  bool operator==(const Ast& other) const;

 private:
  std::vector<AstNode> nodes_;
  std::vector<int> terminals_;
  int root_ = 0;
};

// MiniLang front end. Throws SyntaxError (with 1-based line/column) on
// malformed or empty input.
Ast ParseMiniLang(std::string_view source);

// NODE-line interchange format, one tab-separated record per line:
//   NODE <id> <kind> <parent-id|-> <T|N> <token-index|-> <label|->
Ast ParseAstText(std::string_view text);
Ast IngestAstFile(const std::filesystem::path& path);
std::string FormatAst(const Ast& ast);

// Lowercased camelCase / snake_case pieces; empty when the name does not
// split into at least two pieces.
std::vector<std::string> SplitIdentifier(std::string_view name);

enum class EdgeType {
  kAst,
  kNextToken,
  kSubToken,
  kLastUse,
  kLastWrite,
  kComputedFrom,
};
inline constexpr std::size_t kEdgeTypeCount = 6;

std::string_view EdgeTypeName(EdgeType type);
EdgeType ParseEdgeType(std::string_view name);

struct Edge {
  int src = 0;
  int dst = 0;
  EdgeType type = EdgeType::kAst;
  auto operator<=>(const Edge&) const = default;
};

enum class NodeRole { kNonTerminal, kTerminal, kSubtoken };

struct GraphNode {
  int id = 0;
  std::string kind;
  // Embedding label: token text for terminals and subtokens, kind name for
  // non-terminals.
  std::string label;
  NodeRole role = NodeRole::kNonTerminal;
  std::optional<int> token_index;
  // Originating terminal for subtoken nodes.
  int origin = -1;
};

struct GraphStats {
  std::size_t nodes = 0;
  std::array<std::size_t, kEdgeTypeCount> edges{};
  std::size_t total_edges() const;
};

// Multi-edged directed program graph over AST and subtoken nodes.
struct ProgramGraph {
  std::vector<GraphNode> nodes;
  std::vector<Edge> edges;  // sorted, unique
  std::size_t node_cap = kDefaultNodeCap;

  GraphStats Stats() const;
  std::vector<Edge> EdgesOfType(EdgeType type) const;
  // Terminal node ids in token order; with `with_subtokens` each terminal is
  // followed by its subtoken nodes.
  std::vector<int> TokenSequence(bool with_subtokens) const;
  // NODE lines followed by `E <src> <dst> <edge-type>` lines.
  std::string Dump() const;
};

enum class Access { kRead, kWrite };

struct VarOccurrence {
  int node = 0;
  std::string name;
  Access access = Access::kRead;
  // Statement counter in traversal order and position inside it; the
  // right-hand side of an assignment precedes its target.
  int statement = 0;
  int order = 0;
};

// Variable occurrences in evaluation order (loop bodies visited once).
std::vector<VarOccurrence> CollectOccurrences(const Ast& ast);

// AstEdge, NextToken and SubToken edges plus subtoken nodes, truncated to
// `node_cap` nodes in id order.
ProgramGraph AddSyntacticEdges(const Ast& ast,
                               std::size_t node_cap = kDefaultNodeCap);

// LastUse, LastWrite and ComputedFrom edges over AST node ids.
std::vector<Edge> ComputeDataflowEdges(const Ast& ast);

ProgramGraph BuildProgramGraph(const Ast& ast,
                               std::size_t node_cap = kDefaultNodeCap);
ProgramGraph BuildProgramGraph(std::string_view minilang_source,
                               std::size_t node_cap = kDefaultNodeCap);

}  // namespace gsn::graph
