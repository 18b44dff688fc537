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

#include <algorithm>
#include <set>

#include "gsn/code_graph.h"

namespace gsn::graph {
namespace {

void Truncate(ProgramGraph& g) {
  const auto cap = static_cast<int>(g.node_cap);
  if (g.nodes.size() > g.node_cap) g.nodes.resize(g.node_cap);
  std::erase_if(g.edges,
                [cap](const Edge& e) { return e.src >= cap || e.dst >= cap; });
}

void Normalize(std::vector<Edge>& edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

}  // namespace

std::size_t GraphStats::total_edges() const {
  std::size_t n = 0;
  for (std::size_t e : edges) n += e;
  return n;
}

GraphStats ProgramGraph::Stats() const {
  GraphStats s;
  s.nodes = nodes.size();
  for (const Edge& e : edges) ++s.edges[static_cast<std::size_t>(e.type)];
  return s;
}

std::vector<Edge> ProgramGraph::EdgesOfType(EdgeType type) const {
  std::vector<Edge> out;
  for (const Edge& e : edges)
    if (e.type == type) out.push_back(e);
  return out;
}

std::vector<int> ProgramGraph::TokenSequence(bool with_subtokens) const {
  std::vector<int> terminals;
  for (const GraphNode& n : nodes)
    if (n.role == NodeRole::kTerminal) terminals.push_back(n.id);
  std::sort(terminals.begin(), terminals.end(), [&](int a, int b) {
    return *nodes[a].token_index < *nodes[b].token_index;
  });
  if (!with_subtokens) return terminals;
  std::vector<std::vector<int>> subtokens(nodes.size());
  for (const GraphNode& n : nodes)
    if (n.role == NodeRole::kSubtoken) subtokens[n.origin].push_back(n.id);
  std::vector<int> out;
  for (int t : terminals) {
    out.push_back(t);
    out.insert(out.end(), subtokens[t].begin(), subtokens[t].end());
  }
  return out;
}

std::string ProgramGraph::Dump() const {
  std::vector<int> parent(nodes.size(), -1);
  for (const Edge& e : edges)
    if (e.type == EdgeType::kAst) parent[e.dst] = e.src;
  std::string out;
  for (const GraphNode& n : nodes) {
    out += "NODE\t" + std::to_string(n.id) + "\t" + n.kind + "\t";
    out += parent[n.id] < 0 ? "-" : std::to_string(parent[n.id]);
    out += n.role == NodeRole::kTerminal ? "\tT\t" : "\tN\t";
    out += n.token_index ? std::to_string(*n.token_index) : "-";
    out += "\t";
    out += (n.role == NodeRole::kNonTerminal || n.label.empty()) ? "-" : n.label;
    out += "\n";
  }
  for (const Edge& e : edges)
    out += "E\t" + std::to_string(e.src) + "\t" + std::to_string(e.dst) +
           "\t" + std::string(EdgeTypeName(e.type)) + "\n";
  return out;
}

ProgramGraph AddSyntacticEdges(const Ast& ast, std::size_t node_cap) {
  if (node_cap < 1) throw std::invalid_argument("node_cap must be >= 1");
  ProgramGraph g;
  g.node_cap = node_cap;
  for (const AstNode& a : ast.nodes()) {
    GraphNode n;
    n.id = a.id;
    n.kind = a.kind;
    n.label = a.is_terminal ? a.label : a.kind;
    n.role = a.is_terminal ? NodeRole::kTerminal : NodeRole::kNonTerminal;
    n.token_index = a.token_index;
    g.nodes.push_back(std::move(n));
    for (int c : a.children) g.edges.push_back({a.id, c, EdgeType::kAst});
  }
  const auto& terms = ast.terminals();
  for (std::size_t k = 1; k < terms.size(); ++k)
    g.edges.push_back({terms[k - 1], terms[k], EdgeType::kNextToken});
  for (int t : terms) {
    std::vector<std::string> seen;
    for (std::string& piece : SplitIdentifier(ast.node(t).label)) {
      if (std::find(seen.begin(), seen.end(), piece) != seen.end()) continue;
      seen.push_back(piece);
      GraphNode n;
      n.id = static_cast<int>(g.nodes.size());
      n.kind = "SubToken";
      n.label = std::move(piece);
      n.role = NodeRole::kSubtoken;
      n.origin = t;
      g.edges.push_back({n.id, t, EdgeType::kSubToken});
      g.nodes.push_back(std::move(n));
    }
  }
  Normalize(g.edges);
  Truncate(g);
  return g;
}

ProgramGraph BuildProgramGraph(const Ast& ast, std::size_t node_cap) {
  ProgramGraph g = AddSyntacticEdges(ast, node_cap);
  const auto flow = ComputeDataflowEdges(ast);
  g.edges.insert(g.edges.end(), flow.begin(), flow.end());
  Normalize(g.edges);
  Truncate(g);
  return g;
}

ProgramGraph BuildProgramGraph(std::string_view minilang_source,
                               std::size_t node_cap) {
  return BuildProgramGraph(ParseMiniLang(minilang_source), node_cap);
}

}  // namespace gsn::graph
