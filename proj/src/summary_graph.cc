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

#include "gsn/summary_graph.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace gsn::graph {
namespace {

constexpr std::string_view kDefaultRelations[] = {
    "root",      "acl",    "acomp",     "advcl",    "advmod", "agent",
    "amod",      "appos",  "attr",      "aux",      "auxpass", "case",
    "cc",        "ccomp",  "compound",  "conj",     "csubj",  "csubjpass",
    "dative",    "dep",    "det",       "dobj",     "expl",   "intj",
    "mark",      "meta",   "neg",       "nmod",     "npadvmod", "nsubj",
    "nsubjpass", "nummod", "oprd",      "parataxis", "pcomp", "pobj",
    "poss",      "preconj", "predet",   "prep",     "prt",    "punct",
    "quantmod",  "relcl",  "xcomp",     "obj",      "obl",    "iobj",
    "cop",
};

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string BaseLabel(std::string_view label) {
  return Lower(label.substr(0, label.find(':')));
}

bool ParseInt(std::string_view text, int& value) {
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  return ec == std::errc() && ptr == end;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void FinishSentence(DepSentence& s, std::vector<int>& ids, int first_line,
                    std::vector<DepSentence>& out) {
  if (s.tokens.empty()) return;
  const int n = static_cast<int>(s.tokens.size());
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    if (ids[i] != i + 1)
      throw FormatError("sentence at line " + std::to_string(first_line) +
                        ": token ids must run 1.." + std::to_string(n));
    const int head = s.tokens[i].head;
    if (head < 0 || head > n)
      throw FormatError("sentence at line " + std::to_string(first_line) +
                        ": HEAD " + std::to_string(head) +
                        " out of range for " + std::to_string(n) + " tokens");
    if (head == i + 1)
      throw FormatError("sentence at line " + std::to_string(first_line) +
                        ": token " + std::to_string(i + 1) +
                        " is its own head");
    if (head == 0) ++roots;
  }
  if (roots != 1)
    throw FormatError("sentence at line " + std::to_string(first_line) +
                      ": expected exactly one root, found " +
                      std::to_string(roots));
  out.push_back(std::move(s));
  s = DepSentence{};
  ids.clear();
}

}  // namespace

std::vector<DepSentence> ParseConllu(std::string_view text) {
  std::vector<DepSentence> out;
  DepSentence current;
  std::vector<int> ids;
  int line_no = 0, first_line = 1;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      FinishSentence(current, ids, first_line, out);
      first_line = line_no + 1;
      continue;
    }
    if (line.front() == '#') continue;
    std::vector<std::string_view> cols;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 10)
      throw FormatError("line " + std::to_string(line_no) + ": expected 10 " +
                        "tab-separated columns, found " +
                        std::to_string(cols.size()));
    if (cols[0].find('-') != std::string_view::npos ||
        cols[0].find('.') != std::string_view::npos)
      continue;
    int id = 0, head = 0;
    if (!ParseInt(cols[0], id))
      throw FormatError("line " + std::to_string(line_no) +
                        ": non-integer ID '" + std::string(cols[0]) + "'");
    if (!ParseInt(cols[6], head))
      throw FormatError("line " + std::to_string(line_no) +
                        ": non-integer HEAD '" + std::string(cols[6]) + "'");
    if (current.tokens.empty()) first_line = line_no;
    current.tokens.push_back(
        {std::string(cols[1]), head, std::string(cols[7])});
    ids.push_back(id);
  }
  FinishSentence(current, ids, first_line, out);
  return out;
}

std::vector<DepSentence> ReadConlluFile(const std::filesystem::path& path) {
  return ParseConllu(ReadFile(path));
}

std::vector<std::string> TokenizeText(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      cur += c;
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

DepSentence LinearParse(std::string_view text) {
  DepSentence s;
  const auto tokens = TokenizeText(text);
  for (std::size_t i = 0; i < tokens.size(); ++i)
    s.tokens.push_back({tokens[i], static_cast<int>(i), i == 0 ? "root" : "dep"});
  return s;
}

RelationSet::RelationSet(std::vector<std::string> names) {
  for (const auto& n : names) names_.insert(BaseLabel(n));
  names_.insert("dep");
  names_.insert("root");
}

RelationSet RelationSet::Default() {
  return RelationSet(std::vector<std::string>(std::begin(kDefaultRelations),
                                              std::end(kDefaultRelations)));
}

RelationSet RelationSet::FromFile(const std::filesystem::path& path) {
  std::istringstream in(ReadFile(path));
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    names.push_back(line.substr(b, e - b + 1));
  }
  if (names.empty()) throw FormatError("relation file " + path.string() +
                                       " lists no relations");
  return RelationSet(std::move(names));
}

bool RelationSet::Contains(std::string_view label) const {
  return names_.count(BaseLabel(label)) > 0;
}

std::string RelationSet::Normalize(std::string_view label) const {
  std::string base = BaseLabel(label);
  return names_.count(base) ? base : std::string("dep");
}

std::size_t SummaryGraph::token_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(),
                    [](const SummaryNode& n) { return !n.is_subtoken; }));
}

std::vector<int> SummaryGraph::TokenSequence() const {
  std::vector<int> out;
  for (const SummaryNode& n : nodes)
    if (!n.is_subtoken) out.push_back(n.id);
  return out;
}

std::string SummaryGraph::Dump() const {
  std::string out;
  for (const SummaryNode& n : nodes)
    out += "NODE\t" + std::to_string(n.id) + "\t" +
           (n.is_subtoken ? "SubToken" : "Token") + "\t-\t" +
           (n.is_subtoken ? "N\t-" : "T\t" + std::to_string(n.id)) + "\t" +
           n.label + "\n";
  for (const SummaryEdge& e : edges)
    out += "E\t" + std::to_string(e.src) + "\t" + std::to_string(e.dst) +
           "\t" + e.label + "\n";
  return out;
}

SummaryGraph BuildSummaryGraph(const std::vector<DepSentence>& sentences,
                               const RelationSet& relations,
                               std::size_t node_cap) {
  if (node_cap < 1) throw std::invalid_argument("node_cap must be >= 1");
  SummaryGraph g;
  g.node_cap = node_cap;
  std::vector<SummaryEdge> edges;
  std::vector<std::string> forms;
  int base = 0;
  for (std::size_t si = 0; si < sentences.size(); ++si) {
    const auto& tokens = sentences[si].tokens;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const int id = base + static_cast<int>(i);
      forms.push_back(tokens[i].form);
      g.nodes.push_back({id, Lower(tokens[i].form), false,
                         static_cast<int>(si), -1});
      if (tokens[i].head > 0) {
        if (!relations.Contains(tokens[i].relation)) ++g.unknown_relations;
        edges.push_back({id, base + tokens[i].head - 1,
                         relations.Normalize(tokens[i].relation)});
      }
      if (id > 0) edges.push_back({id - 1, id, "NextToken"});
    }
    base += static_cast<int>(tokens.size());
  }
  const int token_count = base;
  for (int t = 0; t < token_count; ++t) {
    std::vector<std::string> seen;
    for (std::string& piece : SplitIdentifier(forms[t])) {
      if (std::find(seen.begin(), seen.end(), piece) != seen.end()) continue;
      seen.push_back(piece);
      const int id = static_cast<int>(g.nodes.size());
      g.nodes.push_back({id, std::move(piece), true, g.nodes[t].sentence, t});
      edges.push_back({id, t, "SubToken"});
    }
  }
  const auto cap = static_cast<int>(node_cap);
  if (g.nodes.size() > node_cap) g.nodes.resize(node_cap);
  std::erase_if(edges, [cap](const SummaryEdge& e) {
    return e.src >= cap || e.dst >= cap;
  });
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  g.edges = std::move(edges);
  return g;
}

SummaryGraph BuildSummaryGraph(std::string_view text,
                               const RelationSet& relations,
                               std::size_t node_cap) {
  DepSentence s = LinearParse(text);
  std::vector<DepSentence> sentences;
  if (!s.tokens.empty()) sentences.push_back(std::move(s));
  return BuildSummaryGraph(sentences, relations, node_cap);
}

}  // namespace gsn::graph
