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

#include "gsn/commands.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "CLI11.hpp"
#include "gsn/config.h"
#include "gsn/experiment.h"
#include "gsn/index.h"
#include "gsn/service.h"
#include "json.hpp"

namespace gsn::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

void Emit(std::ostream& out, const Json& record) {
  out << record.dump() << "\n";
}

Json MetricsJson(const retrieval::Metrics& m) {
  return Json{{"r_at_1", m.r_at_1},
              {"r_at_5", m.r_at_5},
              {"r_at_10", m.r_at_10},
              {"mrr", m.mrr},
              {"ndcg", m.ndcg}};
}

fs::path BaseDir(const std::string& corpus) {
  return fs::path(corpus).parent_path();
}

graph::RelationSet Relations(const Config& config) {
  return config.relations.empty()
             ? graph::RelationSet::Default()
             : graph::RelationSet::FromFile(config.relations);
}

std::string Require(const std::string& value, const char* name) {
  if (value.empty())
    throw ConfigError(std::string("missing ") + name +
                      " (pass the flag or set it in the config)");
  return value;
}

void ReportSkipped(std::ostream& err,
                   const std::vector<std::pair<std::string, std::string>>& s) {
  for (const auto& [id, why] : s)
    err << "skipped " << id << ": " << why << "\n";
}

// Options shared by every subcommand.
struct Common {
  std::string config_path;
  std::vector<std::string> settings;
  std::string corpus, validation, test, vocab, checkpoint, index;
};

Config ResolveConfig(const Common& c) {
  std::string path = c.config_path;
  if (path.empty())
    if (const char* env = std::getenv("GSN_CONFIG")) path = env;
  Config config = path.empty() ? Config{} : LoadConfig(path);
  for (const std::string& kv : c.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--set expects key=value, got '" + kv + "'");
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
      return s;
    };
    ApplySetting(config, trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
  }
  if (!c.corpus.empty()) config.corpus = c.corpus;
  if (!c.validation.empty()) config.validation_corpus = c.validation;
  if (!c.test.empty()) config.test_corpus = c.test;
  if (!c.vocab.empty()) config.vocab = c.vocab;
  if (!c.checkpoint.empty()) config.checkpoint = c.checkpoint;
  if (!c.index.empty()) config.index = c.index;
  config.Validate();
  return config;
}

train::DualEncoderModel LoadModel(const Config& config) {
  return train::DualEncoderModel::Load(Require(config.checkpoint, "checkpoint"),
                                       &config.model);
}

int CmdGraph(const std::string& lang, const std::string& in, bool stats,
             const Config& config, std::ostream& out) {
  std::ifstream file(in, std::ios::binary);
  if (!file) throw graph::FormatError("cannot open " + in);
  std::stringstream buf;
  buf << file.rdbuf();
  const std::string text = buf.str();
  if (lang == "minilang" || lang == "ast") {
    const graph::Ast ast =
        lang == "ast" ? graph::ParseAstText(text) : graph::ParseMiniLang(text);
    const auto g = graph::BuildProgramGraph(ast, config.node_cap);
    if (!stats) {
      out << g.Dump();
      return kExitOk;
    }
    const auto s = g.Stats();
    Json edges = Json::object();
    for (std::size_t t = 0; t < graph::kEdgeTypeCount; ++t)
      edges[std::string(graph::EdgeTypeName(static_cast<graph::EdgeType>(t)))] =
          s.edges[t];
    Emit(out, Json{{"nodes", s.nodes}, {"edges", edges}});
    return kExitOk;
  }
  const auto relations = Relations(config);
  graph::SummaryGraph g =
      lang == "conllu"
          ? graph::BuildSummaryGraph(graph::ParseConllu(text), relations,
                                     config.node_cap)
          : graph::BuildSummaryGraph(text, relations, config.node_cap);
  if (!stats) {
    out << g.Dump();
    return kExitOk;
  }
  Emit(out, Json{{"nodes", g.nodes.size()},
                 {"tokens", g.token_count()},
                 {"edges", g.edges.size()},
                 {"unknown_relations", g.unknown_relations}});
  return kExitOk;
}

int CmdVocab(const Config& config, std::ostream& out, std::ostream& err) {
  const std::string corpus = Require(config.corpus, "corpus");
  const auto report = train::BuildExamples(
      train::ReadCorpus(corpus), BaseDir(corpus), Relations(config),
      config.graph_options());
  ReportSkipped(err, report.skipped);
  const auto vocab = train::BuildVocabulary(report.examples, config.vocab_size);
  vocab.Save(Require(config.vocab, "vocab"));
  Emit(out, Json{{"vocab", config.vocab},
                 {"size", vocab.size()},
                 {"skipped", report.skipped.size()}});
  return kExitOk;
}

int CmdTrain(const Config& config, std::ostream& out, std::ostream& err) {
  const std::string corpus = Require(config.corpus, "corpus");
  const std::string validation =
      Require(config.validation_corpus, "validation corpus");
  const auto checkpoint = Require(config.checkpoint, "checkpoint");
  const Dataset data =
      MakeDataset(train::ReadCorpus(corpus), train::ReadCorpus(validation), {},
                  BaseDir(corpus), Relations(config), config);
  ReportSkipped(err, data.skipped);
  if (!config.vocab.empty()) data.vocab.Save(config.vocab);
  train::DualEncoderModel model(config.model, data.vocab.size(),
                                config.train.seed);
  const auto fit =
      train::Fit(std::move(model), data.train, data.validation, config.train);
  for (const auto& e : fit.history)
    Emit(out, Json{{"epoch", e.epoch},
                   {"loss", e.loss},
                   {"validation_mrr", e.validation_mrr},
                   {"lr", e.lr}});
  fit.model.Save(checkpoint);
  Emit(out, Json{{"checkpoint", checkpoint},
                 {"best_epoch", fit.best_epoch},
                 {"best_validation_mrr", fit.best_mrr},
                 {"stopped_early", fit.stopped_early},
                 {"fingerprint", train::HexDigest(fit.model.fingerprint())}});
  return kExitOk;
}

int CmdIndex(const Config& config, bool append, std::ostream& out,
             std::ostream& err) {
  const std::string corpus = Require(config.corpus, "corpus");
  const std::string path = Require(config.index, "index");
  auto model = LoadModel(config);
  const auto vocab = train::Vocabulary::Load(Require(config.vocab, "vocab"));
  retrieval::VectorIndex index = append && fs::exists(path)
                                     ? retrieval::VectorIndex::Load(path)
                                     : retrieval::NewIndex(model);
  const auto report =
      retrieval::EmbedCorpus(index, train::ReadCorpus(corpus), BaseDir(corpus),
                             config.graph_options(), vocab, model);
  ReportSkipped(err, report.skipped);
  index.Save(path);
  Emit(out, Json{{"index", path},
                 {"entries", index.size()},
                 {"added", report.added},
                 {"skipped", report.skipped.size()},
                 {"dim", index.dim()}});
  return kExitOk;
}

int CmdQuery(const Config& config, const std::string& q, int k,
             std::ostream& out) {
  if (q.empty()) throw ConfigError("--q must not be empty");
  if (k < 1) throw ConfigError("--k must be >= 1");
  auto model = LoadModel(config);
  const auto vocab = train::Vocabulary::Load(Require(config.vocab, "vocab"));
  const auto index =
      retrieval::VectorIndex::Load(Require(config.index, "index"));
  if (index.fingerprint() != model.fingerprint())
    throw retrieval::IndexError("index was not built by this checkpoint");
  const auto result = retrieval::Query(index, model, vocab, q,
                                       static_cast<std::size_t>(k),
                                       config.score_display, config.node_cap);
  for (const auto& item : result.items)
    Emit(out, Json{{"id", item.id}, {"score", item.score}});
  return kExitOk;
}

int CmdEval(const Config& config, std::ostream& out, std::ostream& err) {
  const std::string corpus = Require(
      config.test_corpus.empty() ? config.corpus : config.test_corpus,
      "test corpus");
  auto model = LoadModel(config);
  const auto vocab = train::Vocabulary::Load(Require(config.vocab, "vocab"));
  const auto report =
      train::BuildExamples(train::ReadCorpus(corpus), BaseDir(corpus),
                           Relations(config), config.graph_options());
  ReportSkipped(err, report.skipped);
  const auto pairs =
      train::FeaturizeAll(report.examples, vocab, config.graph_options());
  const auto ev = retrieval::EvaluateTestset(model, pairs);
  Json rec = MetricsJson(ev.metrics);
  rec["queries"] = pairs.size();
  rec["skipped"] = report.skipped.size();
  Emit(out, rec);
  return kExitOk;
}

int CmdSweep(const Config& config, const std::string& param,
             const std::string& values, std::ostream& out, std::ostream& err) {
  const auto list = ParseValueList(values);
  std::vector<Config> cells;
  for (int v : list) cells.push_back(WithSweepValue(config, param, v));
  const std::string corpus = Require(config.corpus, "corpus");
  const Dataset data = MakeDataset(
      train::ReadCorpus(corpus),
      train::ReadCorpus(Require(config.validation_corpus, "validation corpus")),
      train::ReadCorpus(Require(config.test_corpus, "test corpus")),
      BaseDir(corpus), Relations(config), config);
  ReportSkipped(err, data.skipped);
  bool all_finite = true;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const ExperimentResult r = RunExperiment(cells[i], data);
    Json rec{{"param", param}, {"value", list[i]}};
    const Json metrics = MetricsJson(r.metrics);
    for (const auto& [key, v] : metrics.items()) rec[key] = v;
    rec["epochs"] = r.epochs;
    rec["best_epoch"] = r.best_epoch;
    rec["seconds"] = r.seconds;
    Emit(out, rec);
    out.flush();
    for (double m : {r.metrics.r_at_1, r.metrics.r_at_5, r.metrics.r_at_10,
                     r.metrics.mrr, r.metrics.ndcg})
      all_finite = all_finite && std::isfinite(m);
  }
  return all_finite ? kExitOk : kExitNumeric;
}

int CmdSynth(std::size_t count, std::uint64_t seed, std::size_t valid,
             std::size_t test, const std::string& dir, std::ostream& out) {
  if (valid + test >= count)
    throw ConfigError("validation and test splits leave no training pairs");
  const auto records = train::SyntheticCorpus(count, seed);
  fs::create_directories(dir);
  const std::size_t n_train = count - valid - test;
  auto slice = [&](std::size_t b, std::size_t e) {
    return std::vector<train::CorpusRecord>(records.begin() + b,
                                            records.begin() + e);
  };
  train::WriteCorpus(fs::path(dir) / "train.jsonl", slice(0, n_train));
  train::WriteCorpus(fs::path(dir) / "valid.jsonl",
                     slice(n_train, n_train + valid));
  train::WriteCorpus(fs::path(dir) / "test.jsonl",
                     slice(n_train + valid, count));
  Emit(out, Json{{"dir", dir},
                 {"train", n_train},
                 {"valid", valid},
                 {"test", test}});
  return kExitOk;
}

int CmdServe(const Config& config, const std::string& host, int port,
             std::ostream& out) {
  SearchService service;
  HttpServer server(service);
  const int bound = server.Bind(host, port);
  if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" +
                                          std::to_string(port));
  auto model = LoadModel(config);
  auto vocab = train::Vocabulary::Load(Require(config.vocab, "vocab"));
  auto index = retrieval::VectorIndex::Load(Require(config.index, "index"));
  if (index.fingerprint() != model.fingerprint())
    throw retrieval::IndexError("index was not built by this checkpoint");
  service.Load(std::move(index), std::move(model), std::move(vocab),
               config.score_display, config.node_cap);
  Emit(out, Json{{"host", host}, {"port", bound}});
  out.flush();
  server.Listen();
  return kExitOk;
}

}  // namespace

int RunCommand(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Graph-based semantic code search", "gsn"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path,
                    "Config file (default: $GSN_CONFIG)");
    sub->add_option("--set", common.settings, "Override a config key=value");
  };

  std::string lang = "minilang", in;
  bool dump = false, stats = false;
  auto* graph_cmd = app.add_subcommand("graph", "Print a program or summary graph");
  graph_cmd->add_option("--lang", lang, "minilang, ast, text or conllu")
      ->check(CLI::IsMember({"minilang", "ast", "text", "conllu"}));
  graph_cmd->add_option("--in", in, "Input file")->required();
  graph_cmd->add_flag("--dump", dump, "NODE/E lines (default)");
  graph_cmd->add_flag("--stats", stats, "Node and edge counts as JSON");
  add_common(graph_cmd);

  auto* vocab_cmd = app.add_subcommand("vocab", "Build the vocabulary");
  vocab_cmd->add_option("--corpus", common.corpus, "Training corpus");
  vocab_cmd->add_option("--out", common.vocab, "Vocabulary file to write");
  add_common(vocab_cmd);

  auto* train_cmd = app.add_subcommand("train", "Train the dual encoders");
  train_cmd->add_option("--corpus", common.corpus, "Training corpus");
  train_cmd->add_option("--valid", common.validation, "Validation corpus");
  train_cmd->add_option("--vocab", common.vocab, "Vocabulary file to write");
  train_cmd->add_option("--checkpoint", common.checkpoint,
                        "Checkpoint file to write");
  add_common(train_cmd);

  bool append = false;
  auto* index_cmd = app.add_subcommand("index", "Embed a corpus into an index");
  index_cmd->add_option("--corpus", common.corpus, "Corpus to embed");
  index_cmd->add_option("--checkpoint", common.checkpoint, "Checkpoint");
  index_cmd->add_option("--vocab", common.vocab, "Vocabulary");
  index_cmd->add_option("--out", common.index, "Index file to write");
  index_cmd->add_flag("--append", append, "Append to an existing index");
  add_common(index_cmd);

  std::string q;
  int k = 10;
  std::string display;
  auto* query_cmd = app.add_subcommand("query", "Search an index");
  query_cmd->add_option("--index", common.index, "Index file");
  query_cmd->add_option("--checkpoint", common.checkpoint, "Checkpoint");
  query_cmd->add_option("--vocab", common.vocab, "Vocabulary");
  query_cmd->add_option("--q", q, "Query text")->required();
  query_cmd->add_option("--k", k, "Results to return");
  query_cmd->add_option("--display", display, "raw or plus-one")
      ->check(CLI::IsMember({"raw", "plus-one"}));
  add_common(query_cmd);

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate on test pairs");
  eval_cmd->add_option("--corpus", common.test, "Test corpus");
  eval_cmd->add_option("--checkpoint", common.checkpoint, "Checkpoint");
  eval_cmd->add_option("--vocab", common.vocab, "Vocabulary");
  add_common(eval_cmd);

  std::string param, values;
  auto* sweep_cmd = app.add_subcommand("sweep", "Train and evaluate a grid");
  sweep_cmd->add_option("--param", param, "hops, heads or dim")
      ->required()
      ->check(CLI::IsMember({"hops", "heads", "dim"}));
  sweep_cmd->add_option("--values", values, "e.g. 1..5 or 1,2,4,8")->required();
  sweep_cmd->add_option("--corpus", common.corpus, "Training corpus");
  sweep_cmd->add_option("--valid", common.validation, "Validation corpus");
  sweep_cmd->add_option("--test", common.test, "Test corpus");
  add_common(sweep_cmd);

  std::size_t count = 200, valid = 25, test = 50;
  std::uint64_t seed = 7;
  std::string dir;
  auto* synth_cmd =
      app.add_subcommand("synth", "Write a synthetic MiniLang corpus");
  synth_cmd->add_option("--count", count, "Pairs to generate");
  synth_cmd->add_option("--seed", seed, "Generator seed");
  synth_cmd->add_option("--valid", valid, "Validation pairs");
  synth_cmd->add_option("--test", test, "Test pairs");
  synth_cmd->add_option("--out-dir", dir, "Output directory")->required();

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve_cmd = app.add_subcommand("serve", "Serve /search over HTTP");
  serve_cmd->add_option("--index", common.index, "Index file");
  serve_cmd->add_option("--checkpoint", common.checkpoint, "Checkpoint");
  serve_cmd->add_option("--vocab", common.vocab, "Vocabulary");
  serve_cmd->add_option("--host", host, "Bind address");
  serve_cmd->add_option("--port", port, "Port (0 picks a free one)");
  add_common(serve_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "gsn: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (synth_cmd->parsed())
      return CmdSynth(count, seed, valid, test, dir, out);
    Config config = ResolveConfig(common);
    if (!display.empty())
      ApplySetting(config, "score_display", display);
    if (graph_cmd->parsed()) return CmdGraph(lang, in, stats, config, out);
    if (vocab_cmd->parsed()) return CmdVocab(config, out, err);
    if (train_cmd->parsed()) return CmdTrain(config, out, err);
    if (index_cmd->parsed()) return CmdIndex(config, append, out, err);
    if (query_cmd->parsed()) return CmdQuery(config, q, k, out);
    if (eval_cmd->parsed()) return CmdEval(config, out, err);
    if (sweep_cmd->parsed()) return CmdSweep(config, param, values, out, err);
    if (serve_cmd->parsed()) return CmdServe(config, host, port, out);
  } catch (const ad::NumericError& e) {
    err << "gsn: numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const ConfigError& e) {
    err << "gsn: " << e.what() << "\n";
    return kExitUsage;
  } catch (const graph::SyntaxError& e) {
    err << "gsn: syntax error at " << e.line() << ":" << e.column() << ": "
        << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "gsn: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace gsn::cli
