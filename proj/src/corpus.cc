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

#include "gsn/corpus.h"

#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

namespace gsn::train {
namespace {

using json = nlohmann::json;

std::string Field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  if (!it->is_string())
    throw graph::FormatError(std::string("field '") + key +
                             "' must be a string");
  return it->get<std::string>();
}

}  // namespace

std::vector<CorpusRecord> ReadCorpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw graph::FormatError("cannot open corpus " + path.string());
  std::vector<CorpusRecord> out;
  std::set<std::string> ids;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw graph::FormatError(where + ": " + e.what());
    }
    if (!j.is_object()) throw graph::FormatError(where + ": expected an object");
    CorpusRecord r;
    try {
      r.id = Field(j, "id");
      r.code = Field(j, "code");
      r.code_ast = Field(j, "code_ast");
      r.docstring = Field(j, "docstring");
      r.docstring_conllu = Field(j, "docstring_conllu");
    } catch (const graph::FormatError& e) {
      throw graph::FormatError(where + ": " + e.what());
    }
    if (r.id.empty()) throw graph::FormatError(where + ": missing id");
    if (!ids.insert(r.id).second)
      throw graph::FormatError(where + ": duplicate id '" + r.id + "'");
    out.push_back(std::move(r));
  }
  return out;
}

void WriteCorpus(const std::filesystem::path& path,
                 const std::vector<CorpusRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const CorpusRecord& r : records) {
    json j;
    j["id"] = r.id;
    if (!r.code.empty()) j["code"] = r.code;
    if (!r.code_ast.empty()) j["code_ast"] = r.code_ast;
    if (!r.docstring.empty()) j["docstring"] = r.docstring;
    if (!r.docstring_conllu.empty()) j["docstring_conllu"] = r.docstring_conllu;
    out << j.dump() << "\n";
  }
}

graph::ProgramGraph BuildCodeGraph(const CorpusRecord& record,
                                   const std::filesystem::path& base_dir,
                                   const GraphOptions& options) {
  if (!record.code.empty())
    return graph::BuildProgramGraph(record.code, options.node_cap);
  if (!record.code_ast.empty())
    return graph::BuildProgramGraph(
        graph::IngestAstFile(base_dir / record.code_ast), options.node_cap);
  throw graph::FormatError("record '" + record.id + "' has no code");
}

graph::SummaryGraph BuildDocGraph(const CorpusRecord& record,
                                  const std::filesystem::path& base_dir,
                                  const graph::RelationSet& relations,
                                  const GraphOptions& options) {
  graph::SummaryGraph g;
  if (!record.docstring_conllu.empty())
    g = graph::BuildSummaryGraph(
        graph::ReadConlluFile(base_dir / record.docstring_conllu), relations,
        options.node_cap);
  else
    g = graph::BuildSummaryGraph(record.docstring, relations,
                                 options.node_cap);
  if (g.nodes.empty())
    throw graph::FormatError("record '" + record.id + "' has an empty summary");
  return g;
}

LoadReport BuildExamples(const std::vector<CorpusRecord>& records,
                         const std::filesystem::path& base_dir,
                         const graph::RelationSet& relations,
                         const GraphOptions& options) {
  LoadReport report;
  for (const CorpusRecord& r : records) {
    try {
      Example ex{r.id, BuildCodeGraph(r, base_dir, options),
                 BuildDocGraph(r, base_dir, relations, options)};
      report.examples.push_back(std::move(ex));
    } catch (const std::exception& e) {
      report.skipped.emplace_back(r.id, e.what());
    }
  }
  return report;
}

std::vector<std::string> Labels(const graph::ProgramGraph& g) {
  std::vector<std::string> out;
  out.reserve(g.nodes.size());
  for (const auto& n : g.nodes) out.push_back(n.label);
  return out;
}

std::vector<std::string> Labels(const graph::SummaryGraph& g) {
  std::vector<std::string> out;
  out.reserve(g.nodes.size());
  for (const auto& n : g.nodes) out.push_back(n.label);
  return out;
}

nn::GraphInput Featurize(const graph::ProgramGraph& g, const Vocabulary& vocab,
                         bool attention_subtokens) {
  nn::GraphInput in;
  for (const auto& n : g.nodes) in.node_tokens.push_back(vocab.Lookup(n.label));
  for (const auto& e : g.edges) in.edges.emplace_back(e.src, e.dst);
  in.sequence = g.TokenSequence(attention_subtokens);
  // A graph without terminals (an empty body) attends over its root alone.
  if (in.sequence.empty() && !g.nodes.empty()) in.sequence.push_back(0);
  return in;
}

nn::GraphInput Featurize(const graph::SummaryGraph& g,
                         const Vocabulary& vocab) {
  nn::GraphInput in;
  for (const auto& n : g.nodes) in.node_tokens.push_back(vocab.Lookup(n.label));
  for (const auto& e : g.edges) in.edges.emplace_back(e.src, e.dst);
  in.sequence = g.TokenSequence();
  return in;
}

std::vector<EncodedPair> FeaturizeAll(const std::vector<Example>& examples,
                                      const Vocabulary& vocab,
                                      const GraphOptions& options) {
  std::vector<EncodedPair> out;
  out.reserve(examples.size());
  for (const Example& ex : examples)
    out.push_back({ex.id,
                   Featurize(ex.code, vocab, options.attention_subtokens),
                   Featurize(ex.summary, vocab)});
  return out;
}

Vocabulary BuildVocabulary(const std::vector<Example>& examples,
                           std::size_t max_size) {
  std::vector<std::vector<std::string>> streams;
  for (const Example& ex : examples) {
    streams.push_back(Labels(ex.code));
    streams.push_back(Labels(ex.summary));
  }
  return Vocabulary::Build(streams, max_size);
}

namespace {

constexpr const char* kNouns[] = {"price",  "user",  "file",   "score",
                                  "order",  "buffer", "page",  "weight",
                                  "speed",  "item",  "node",   "token"};

std::string Ident(const std::string& noun, const std::string& suffix,
                  bool camel) {
  if (!camel) return noun + "_" + suffix;
  std::string s = suffix;
  s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return noun + s;
}

std::string Replace(std::string text, const std::string& key,
                    const std::string& value) {
  for (std::size_t pos = text.find(key); pos != std::string::npos;
       pos = text.find(key, pos + value.size()))
    text.replace(pos, key.size(), value);
  return text;
}

struct Template {
  const char* code;
  const char* summary;
};

// {a}/{b} are nouns, {a_total}-style keys become compound identifiers and
// {c} an integer constant.
constexpr Template kTemplates[] = {
    {"{a_total} = {a_total} + {b}\n", "add the {b} to the {a} total"},
    {"{a} = {a} * {c}\n{b} = {a}\n", "scale the {a} and store it in {b}"},
    {"if {a} > {b_limit}:\n  {a} = {b_limit}\n",
     "clamp the {a} to the {b} limit"},
    {"if {a} < 0:\n  {a} = 0\n{log_b}({a})\n",
     "reset a negative {a} and log the {b}"},
    {"while {a} > 0:\n  {a} = {a} - 1\n  {b_count} = {b_count} + 1\n",
     "count down the {a} while counting each {b}"},
    {"{a_matches} = {a} == {b}\n", "check whether the {a} equals the {b}"},
    {"tmp = {a}\n{a} = {b}\n{b} = tmp\n", "swap the {a} with the {b}"},
    {"{send_a}({b}, {c})\n", "send the {a} for the {b}"},
    {"{a_avg} = {a_sum} / {b_count}\n", "compute the average {a} per {b}"},
    {"if {b} > {a_max}:\n  {a_max} = {b}\n",
     "update the maximum {a} from the {b}"},
};

}  // namespace

std::vector<CorpusRecord> SyntheticCorpus(std::size_t count,
                                          std::uint64_t seed) {
  constexpr std::size_t kNounCount = std::size(kNouns);
  constexpr std::size_t kTemplateCount = std::size(kTemplates);
  const std::size_t combos = kTemplateCount * kNounCount * (kNounCount - 1);
  if (count > combos)
    throw std::invalid_argument("synthetic corpus holds at most " +
                                std::to_string(combos) + " distinct pairs");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_t(0, kTemplateCount - 1);
  std::uniform_int_distribution<std::size_t> pick_n(0, kNounCount - 1);
  std::uniform_int_distribution<int> pick_c(2, 9);
  std::bernoulli_distribution camel(0.5);
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> used;
  std::vector<CorpusRecord> out;
  while (out.size() < count) {
    const std::size_t t = pick_t(rng), a = pick_n(rng), b = pick_n(rng);
    if (a == b || !used.insert({t, a, b}).second) continue;
    const bool cc = camel(rng);
    const std::string na = kNouns[a], nb = kNouns[b];
    std::string code = kTemplates[t].code;
    for (const char* suffix : {"total", "limit", "count", "matches", "avg",
                               "sum", "max"}) {
      code = Replace(code, std::string("{a_") + suffix + "}",
                     Ident(na, suffix, cc));
      code = Replace(code, std::string("{b_") + suffix + "}",
                     Ident(nb, suffix, cc));
    }
    code = Replace(code, "{log_b}", Ident("log", nb, cc));
    code = Replace(code, "{send_a}", Ident("send", na, cc));
    code = Replace(code, "{a}", na);
    code = Replace(code, "{b}", nb);
    code = Replace(code, "{c}", std::to_string(pick_c(rng)));
    std::string summary = kTemplates[t].summary;
    summary = Replace(Replace(summary, "{a}", na), "{b}", nb);
    char id[32];
    std::snprintf(id, sizeof id, "syn-%04zu", out.size());
    out.push_back({id, code, "", summary, ""});
  }
  return out;
}

}  // namespace gsn::train
