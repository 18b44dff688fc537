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

#include <map>
#include <set>

#include "doctest.h"
#include "gsn/summary_graph.h"

using namespace gsn::graph;

namespace {

std::string Row(int id, const std::string& form, int head,
                const std::string& rel) {
  return std::to_string(id) + "\t" + form + "\t_\t_\t_\t_\t" +
         std::to_string(head) + "\t" + rel + "\t_\t_\n";
}

// "How to check for null" as a dependency parser labels it.
std::string CheckForNull() {
  return "# text = How to check for null\n" + Row(1, "How", 3, "advmod") +
         Row(2, "to", 3, "aux") + Row(3, "check", 0, "ROOT") +
         Row(4, "for", 3, "prep") + Row(5, "null", 4, "pobj") + "\n";
}

}  // namespace

TEST_CASE("CoNLL-U reading") {
  const auto s = ParseConllu(Row(1, "quickly", 2, "advmod") +
                             Row(2, "runs", 0, "root"));
  REQUIRE(s.size() == 1);
  REQUIRE(s[0].tokens.size() == 2);
  CHECK(s[0].tokens[0].head == 2);
  CHECK(s[0].tokens[0].relation == "advmod");
  const SummaryGraph g = BuildSummaryGraph(s, RelationSet::Default());
  CHECK(std::count(g.edges.begin(), g.edges.end(),
                   SummaryEdge{0, 1, "advmod"}) == 1);

  const auto with_comment = ParseConllu("# text = runs\n" + Row(1, "runs", 0, "root"));
  CHECK(with_comment.size() == 1);
  const auto with_range = ParseConllu("1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n" +
                                      Row(1, "do", 0, "root") +
                                      Row(2, "n't", 1, "neg"));
  CHECK(with_range[0].tokens.size() == 2);
  const auto two = ParseConllu(CheckForNull() + "\n" + Row(1, "go", 0, "root"));
  CHECK(two.size() == 2);
}

TEST_CASE("CoNLL-U errors") {
  CHECK_THROWS_AS(ParseConllu(Row(1, "a", 0, "root") + Row(2, "b", 1, "dep") +
                              Row(3, "c", 9, "dep")),
                  FormatError);
  CHECK_THROWS_AS(ParseConllu("x\ta\t_\t_\t_\t_\t0\troot\t_\t_\n"), FormatError);
  CHECK_THROWS_AS(ParseConllu("1\ta\t_\t_\t_\t_\tzero\troot\t_\t_\n"),
                  FormatError);
  CHECK_THROWS_AS(ParseConllu("1\ta\t_\t0\troot\n"), FormatError);
  CHECK_THROWS_AS(ParseConllu(Row(1, "a", 0, "root") + Row(2, "b", 0, "root")),
                  FormatError);
  CHECK_THROWS_AS(ParseConllu(Row(1, "a", 1, "root")), FormatError);
}

TEST_CASE("dependency edges point from dependents to their head") {
  const SummaryGraph g =
      BuildSummaryGraph(ParseConllu(CheckForNull()), RelationSet::Default());
  std::map<std::string, int> id;
  for (const auto& n : g.nodes) id[n.label] = n.id;
  std::set<std::tuple<int, int, std::string>> edges;
  for (const auto& e : g.edges) edges.insert({e.src, e.dst, e.label});
  CHECK(edges.count({id["how"], id["check"], "advmod"}));
  CHECK(edges.count({id["to"], id["check"], "aux"}));
  CHECK(edges.count({id["for"], id["check"], "prep"}));
  CHECK(edges.count({id["null"], id["for"], "pobj"}));
  int next = 0, deps = 0;
  for (const auto& e : g.edges) {
    if (e.label == "NextToken") {
      ++next;
      CHECK(e.dst == e.src + 1);
    } else if (e.label != "SubToken") {
      ++deps;
    }
  }
  CHECK(next == 4);
  CHECK(deps == 4);  // every non-root token exactly once
  CHECK(g.unknown_relations == 0);
}

TEST_CASE("subtokens follow the identifier rules") {
  const SummaryGraph g = BuildSummaryGraph("call fn_a now", RelationSet::Default());
  std::vector<std::string> subs;
  for (const auto& n : g.nodes)
    if (n.is_subtoken) {
      subs.push_back(n.label);
      CHECK(n.origin == 1);
    }
  CHECK(subs == std::vector<std::string>{"fn", "a"});
  int subtoken_edges = 0;
  for (const auto& e : g.edges)
    if (e.label == "SubToken") {
      ++subtoken_edges;
      CHECK(g.nodes[e.src].is_subtoken);
      CHECK(e.dst == 1);
    }
  CHECK(subtoken_edges == 2);
  const SummaryGraph camel = BuildSummaryGraph("parse camelCase", RelationSet::Default());
  CHECK(camel.nodes[1].label == "camelcase");
  CHECK(camel.nodes[2].label == "camel");
  CHECK(camel.nodes[3].label == "case");
}

TEST_CASE("relation set normalisation") {
  const RelationSet rel = RelationSet::Default();
  CHECK(rel.Contains("nsubj"));
  CHECK(rel.Contains("ROOT"));
  CHECK(rel.Normalize("nmod:poss") == "nmod");
  CHECK(rel.Normalize("flibbertigibbet") == "dep");
  const auto s = ParseConllu(Row(1, "a", 2, "weird") + Row(2, "b", 0, "root"));
  const SummaryGraph g = BuildSummaryGraph(s, rel);
  CHECK(g.unknown_relations == 1);
  for (const auto& e : g.edges)
    if (e.label != "NextToken" && e.label != "SubToken") CHECK(rel.Contains(e.label));
  const RelationSet file = RelationSet::FromFile(GSN_DATA_DIR "/relations.txt");
  int count = 0;
  for (const char* label :
       {"root", "acl", "acomp", "advcl", "advmod", "agent", "amod", "appos",
        "attr", "aux", "auxpass", "case", "cc", "ccomp", "compound", "conj",
        "csubj", "csubjpass", "dative", "dep", "det", "dobj", "expl", "intj",
        "mark", "meta", "neg", "nmod", "npadvmod", "nsubj", "nsubjpass",
        "nummod", "oprd", "parataxis", "pcomp", "pobj", "poss", "preconj",
        "predet", "prep", "prt", "punct", "quantmod", "relcl", "xcomp", "obj",
        "obl", "iobj", "cop"}) {
    CHECK(file.Contains(label));
    CHECK(rel.Contains(label));
    ++count;
  }
  CHECK(count == 49);
}

TEST_CASE("linear parse fallback and determinism") {
  const DepSentence s = LinearParse("How to check for null");
  REQUIRE(s.tokens.size() == 5);
  CHECK(s.tokens[0].head == 0);
  CHECK(s.tokens[3].head == 3);
  CHECK(s.tokens[3].relation == "dep");
  const auto a = BuildSummaryGraph(ParseConllu(CheckForNull()), RelationSet::Default());
  const auto b = BuildSummaryGraph(ParseConllu(CheckForNull()), RelationSet::Default());
  CHECK(a.Dump() == b.Dump());
  CHECK(BuildSummaryGraph("", RelationSet::Default()).nodes.empty());
}

TEST_CASE("summary node cap") {
  std::string text;
  for (int i = 0; i < 150; ++i) text += "word_" + std::to_string(i) + " ";
  const SummaryGraph g = BuildSummaryGraph(text, RelationSet::Default());
  CHECK(g.nodes.size() == 200);
  for (const auto& e : g.edges) {
    CHECK(e.src < 200);
    CHECK(e.dst < 200);
  }
}
