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

// Path-sensitive LastUse / LastWrite / ComputedFrom analysis over the AST.
//
// The state maps each variable to the set of its most recent occurrences
// (and writes) along every path reaching the current program point. Branch
// joins take the union; loops iterate until the loop-head state is stable.

#include <map>
#include <set>

#include "gsn/code_graph.h"

namespace gsn::graph {
namespace {

struct FlowState {
  std::map<std::string, std::set<int>> last_use;
  std::map<std::string, std::set<int>> last_write;

  bool operator==(const FlowState&) const = default;

  void Join(const FlowState& other) {
    for (const auto& [v, ids] : other.last_use)
      last_use[v].insert(ids.begin(), ids.end());
    for (const auto& [v, ids] : other.last_write)
      last_write[v].insert(ids.begin(), ids.end());
  }
};

class Analyzer {
 public:
  explicit Analyzer(const Ast& ast) : ast_(ast) {}

  void Run() {
    FlowState state;
    Stmt(ast_.root(), state);
  }

  std::set<Edge> edges;
  std::vector<VarOccurrence> occurrences;
  bool record_occurrences = true;

 private:
  const AstNode& N(int id) const { return ast_.node(id); }

  void Occur(int id, Access access, FlowState& state) {
    const std::string& name = N(id).label;
    for (int target : state.last_use[name])
      edges.insert({id, target, EdgeType::kLastUse});
    for (int target : state.last_write[name])
      edges.insert({id, target, EdgeType::kLastWrite});
    state.last_use[name] = {id};
    if (access == Access::kWrite) state.last_write[name] = {id};
    if (record_occurrences)
      occurrences.push_back({id, name, access, statement_, order_++});
  }

  // Reads in evaluation order; returns the variable occurrence ids seen.
  void Expr(int id, FlowState& state, std::vector<int>& reads) {
    const AstNode& node = N(id);
    if (node.kind == "Identifier") {
      Occur(id, Access::kRead, state);
      reads.push_back(id);
      return;
    }
    if (node.is_terminal) return;
    std::size_t first = 0;
    // The callee name is not a variable.
    if (node.kind == "Call" && !node.children.empty() &&
        N(node.children[0]).kind == "Identifier")
      first = 1;
    for (std::size_t i = first; i < node.children.size(); ++i)
      Expr(node.children[i], state, reads);
  }

  void NewStatement() {
    ++statement_;
    order_ = 0;
  }

  void Stmt(int id, FlowState& state) {
    const AstNode& node = N(id);
    const std::string& kind = node.kind;
    if (kind == "Assign" && node.children.size() == 2 &&
        N(node.children[0]).kind == "Identifier") {
      NewStatement();
      std::vector<int> reads;
      Expr(node.children[1], state, reads);
      const int target = node.children[0];
      Occur(target, Access::kWrite, state);
      for (int r : reads) edges.insert({target, r, EdgeType::kComputedFrom});
      return;
    }
    if (kind == "If" && node.children.size() >= 2) {
      NewStatement();
      std::vector<int> reads;
      Expr(node.children[0], state, reads);
      FlowState then_state = state;
      Stmt(node.children[1], then_state);
      if (node.children.size() >= 3) {
        FlowState else_state = state;
        Stmt(node.children[2], else_state);
        then_state.Join(else_state);
      } else {
        then_state.Join(state);
      }
      state = std::move(then_state);
      return;
    }
    if (kind == "While" && node.children.size() >= 2) {
      const FlowState entry = state;
      FlowState head = entry;
      FlowState exit;
      const bool recording = record_occurrences;
      for (int pass = 0; pass < 64; ++pass) {
        NewStatement();
        FlowState s = head;
        std::vector<int> reads;
        Expr(node.children[0], s, reads);
        exit = s;
        Stmt(node.children[1], s);
        record_occurrences = false;
        FlowState next = entry;
        next.Join(s);
        if (next == head) break;
        head = std::move(next);
      }
      record_occurrences = recording;
      state = std::move(exit);
      return;
    }
    if (kind == "Module" || kind == "Block") {
      for (int c : node.children) Stmt(c, state);
      return;
    }
    // Expression statements and unknown kinds from external front ends:
    // every identifier below is a read.
    NewStatement();
    std::vector<int> reads;
    Expr(id, state, reads);
  }

  const Ast& ast_;
  int statement_ = -1;
  int order_ = 0;
};

}  // namespace

std::vector<Edge> ComputeDataflowEdges(const Ast& ast) {
  Analyzer a(ast);
  a.Run();
  return {a.edges.begin(), a.edges.end()};
}

std::vector<VarOccurrence> CollectOccurrences(const Ast& ast) {
  Analyzer a(ast);
  a.Run();
  return std::move(a.occurrences);
}

}  // namespace gsn::graph
