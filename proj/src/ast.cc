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
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "gsn/code_graph.h"

namespace gsn::graph {

SyntaxError::SyntaxError(const std::string& message, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

Ast::Ast(std::vector<AstNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw FormatError("no root");
  const int n = static_cast<int>(nodes_.size());
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const AstNode& node = nodes_[i];
    if (node.id != i)
      throw FormatError("node ids must be dense; found " +
                        std::to_string(node.id) + " at position " +
                        std::to_string(i));
    if (node.parent == -1) {
      ++roots;
      root_ = i;
    } else if (node.parent < 0 || node.parent >= n) {
      throw FormatError("node " + std::to_string(i) +
                        " references missing parent " +
                        std::to_string(node.parent));
    }
    if (node.is_terminal && !node.children.empty())
      throw FormatError("terminal node " + std::to_string(i) +
                        " has children");
    if (node.is_terminal != node.token_index.has_value())
      throw FormatError("node " + std::to_string(i) +
                        ": token index must be present exactly on terminals");
    for (int c : node.children)
      if (c < 0 || c >= n || nodes_[c].parent != i)
        throw FormatError("node " + std::to_string(i) +
                          " has inconsistent child " + std::to_string(c));
  }
  if (roots == 0) throw FormatError("no root");
  if (roots > 1) throw FormatError("multiple roots");

  std::vector<bool> seen(n, false);
  std::vector<int> stack{root_};
  int visited = 0;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (seen[v]) throw FormatError("cycle through node " + std::to_string(v));
    seen[v] = true;
    ++visited;
    for (int c : nodes_[v].children) stack.push_back(c);
  }
  if (visited != n) throw FormatError("nodes unreachable from root (cycle)");

  for (const AstNode& node : nodes_)
    if (node.is_terminal) terminals_.push_back(node.id);
  std::sort(terminals_.begin(), terminals_.end(), [&](int a, int b) {
    return *nodes_[a].token_index < *nodes_[b].token_index;
  });
  for (std::size_t k = 0; k < terminals_.size(); ++k)
    if (*nodes_[terminals_[k]].token_index != static_cast<int>(k))
      throw FormatError("token indices are not a permutation of 0.." +
                        std::to_string(terminals_.size() - 1));
}

bool Ast::operator==(const Ast& other) const {
  if (nodes_.size() != other.nodes_.size() || root_ != other.root_)
    return false;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const AstNode& a = nodes_[i];
    const AstNode& b = other.nodes_[i];
    if (a.kind != b.kind || a.label != b.label || a.children != b.children ||
        a.parent != b.parent || a.is_terminal != b.is_terminal ||
        a.token_index != b.token_index)
      return false;
  }
  return true;
}

namespace {

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

int ParseInt(std::string_view text, int line_no, const char* what) {
  int value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw FormatError("line " + std::to_string(line_no) + ": bad " + what +
                      " '" + std::string(text) + "'");
  return value;
}

}  // namespace

Ast ParseAstText(std::string_view text) {
  std::vector<AstNode> records;
  std::vector<int> order;  // ids in file order
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (line.starts_with("E\t") || line.starts_with("E ")) continue;
    const auto f = SplitTabs(line);
    if (f.size() != 7 || f[0] != "NODE")
      throw FormatError("line " + std::to_string(line_no) +
                        ": expected 7 tab-separated NODE fields");
    AstNode node;
    node.id = ParseInt(f[1], line_no, "id");
    node.kind = std::string(f[2]);
    node.parent = f[3] == "-" ? -1 : ParseInt(f[3], line_no, "parent id");
    if (f[4] != "T" && f[4] != "N")
      throw FormatError("line " + std::to_string(line_no) +
                        ": terminal flag must be T or N");
    node.is_terminal = f[4] == "T";
    if (f[5] != "-") node.token_index = ParseInt(f[5], line_no, "token index");
    if (f[6] != "-") node.label = std::string(f[6]);
    if (node.id < 0)
      throw FormatError("line " + std::to_string(line_no) + ": negative id");
    if (static_cast<std::size_t>(node.id) >= records.size()) {
      AstNode unset;
      unset.id = -1;
      records.resize(node.id + 1, unset);
    }
    if (records[node.id].id != -1)
      throw FormatError("line " + std::to_string(line_no) + ": duplicate id " +
                        std::to_string(node.id));
    records[node.id] = node;
    order.push_back(node.id);
  }
  if (records.empty()) throw FormatError("no root");
  for (std::size_t i = 0; i < records.size(); ++i)
    if (records[i].id == -1)
      throw FormatError("node ids are not dense: missing " +
                        std::to_string(i));
  for (int id : order) {
    const int parent = records[id].parent;
    if (parent == -1) continue;
    if (parent < 0 || static_cast<std::size_t>(parent) >= records.size())
      throw FormatError("node " + std::to_string(id) +
                        " references missing parent " + std::to_string(parent));
    records[parent].children.push_back(id);
  }
  return Ast(std::move(records));
}

Ast IngestAstFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseAstText(buf.str());
}

std::string FormatAst(const Ast& ast) {
  std::string out;
  for (const AstNode& n : ast.nodes()) {
    out += "NODE\t" + std::to_string(n.id) + "\t" + n.kind + "\t" +
           (n.parent < 0 ? "-" : std::to_string(n.parent)) + "\t" +
           (n.is_terminal ? "T" : "N") + "\t" +
           (n.token_index ? std::to_string(*n.token_index) : "-") + "\t" +
           (n.label.empty() ? "-" : n.label) + "\n";
  }
  return out;
}

std::vector<std::string> SplitIdentifier(std::string_view name) {
  std::vector<std::string> pieces;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) pieces.push_back(std::move(current));
    current.clear();
  };
  auto upper = [](char c) { return std::isupper(static_cast<unsigned char>(c)); };
  auto lower = [](char c) { return std::islower(static_cast<unsigned char>(c)); };
  auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)); };
  for (std::size_t i = 0; i < name.size(); ++i) {
    const char ch = name[i];
    if (!std::isalnum(static_cast<unsigned char>(ch))) {
      flush();
      continue;
    }
    if (!current.empty() && upper(ch)) {
      const char prev = name[i - 1];
      const bool camel = lower(prev) || digit(prev);
      const bool acronym_end =
          upper(prev) && i + 1 < name.size() && lower(name[i + 1]);
      if (camel || acronym_end) flush();
    }
    current += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  flush();
  if (pieces.size() < 2) pieces.clear();
  return pieces;
}

namespace {

constexpr std::array<std::string_view, kEdgeTypeCount> kEdgeNames{
    "AstEdge", "NextToken", "SubToken", "LastUse", "LastWrite", "ComputedFrom"};

}  // namespace

std::string_view EdgeTypeName(EdgeType type) {
  return kEdgeNames[static_cast<std::size_t>(type)];
}

EdgeType ParseEdgeType(std::string_view name) {
  for (std::size_t i = 0; i < kEdgeNames.size(); ++i)
    if (kEdgeNames[i] == name) return static_cast<EdgeType>(i);
  throw FormatError("unknown edge type '" + std::string(name) + "'");
}

}  // namespace gsn::graph
