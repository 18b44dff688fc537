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

#include "gsn/experiment.h"

#include <chrono>
#include <charconv>

namespace gsn::cli {

Dataset MakeDataset(const std::vector<train::CorpusRecord>& train_records,
                    const std::vector<train::CorpusRecord>& validation_records,
                    const std::vector<train::CorpusRecord>& test_records,
                    const std::filesystem::path& base_dir,
                    const graph::RelationSet& relations, const Config& config) {
  const auto options = config.graph_options();
  Dataset data;
  auto build = [&](const std::vector<train::CorpusRecord>& records,
                   const char* split) {
    auto report = train::BuildExamples(records, base_dir, relations, options);
    for (auto& s : report.skipped) data.skipped.push_back(std::move(s));
    if (report.examples.empty())
      throw graph::FormatError(std::string(split) + " split has no usable pairs");
    return std::move(report.examples);
  };
  const auto train_ex = build(train_records, "training");
  const auto valid_ex = build(validation_records, "validation");
  const auto test_ex = test_records.empty()
                           ? std::vector<train::Example>{}
                           : build(test_records, "test");
  data.vocab = train::BuildVocabulary(train_ex, config.vocab_size);
  data.train = train::FeaturizeAll(train_ex, data.vocab, options);
  data.validation = train::FeaturizeAll(valid_ex, data.vocab, options);
  data.test = train::FeaturizeAll(test_ex, data.vocab, options);
  return data;
}

ExperimentResult RunExperiment(const Config& config, const Dataset& data) {
  config.Validate();
  const auto start = std::chrono::steady_clock::now();
  train::DualEncoderModel model(config.model, data.vocab.size(),
                                config.train.seed);
  auto fit = train::Fit(std::move(model), data.train, data.validation,
                        config.train);
  ExperimentResult r;
  r.epochs = static_cast<int>(fit.history.size());
  r.best_epoch = fit.best_epoch;
  r.first_loss = fit.history.front().loss;
  r.last_loss = fit.history.back().loss;
  if (data.test.size() >= 2)
    r.metrics = retrieval::EvaluateTestset(fit.model, data.test).metrics;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            start)
                  .count();
  return r;
}

std::vector<int> ParseValueList(const std::string& text) {
  auto parse = [&](std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
      throw ConfigError("bad value list '" + text + "'");
    return v;
  };
  std::vector<int> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const int lo = parse(std::string_view(text).substr(0, dots));
    const int hi = parse(std::string_view(text).substr(dots + 2));
    if (lo > hi) throw ConfigError("empty range '" + text + "'");
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(parse(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

Config WithSweepValue(const Config& config, const std::string& param,
                      int value) {
  Config c = config;
  if (param == "hops") {
    c.model.hops_code = value;
    c.model.hops_summary = value;
  } else if (param == "heads") {
    c.model.heads = value;
  } else if (param == "dim") {
    c.model.dim = value;
  } else {
    throw ConfigError("unknown sweep parameter '" + param +
                      "' (expected hops, heads or dim)");
  }
  c.Validate();
  return c;
}

}  // namespace gsn::cli
