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

#include "gsn/index.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "binary_io.h"
#include "gsn/kernels.h"

namespace gsn::retrieval {
namespace {

constexpr char kMagic[8] = {'G', 'S', 'N', 'V', 'I', 'D', 'X', '1'};
constexpr std::uint16_t kVersion = 1;

}  // namespace

VectorIndex::VectorIndex(std::size_t dim, const Fingerprint& fingerprint)
    : dim_(dim), fingerprint_(fingerprint) {
  if (dim == 0) throw IndexError("index dimension must be positive");
}

void VectorIndex::Add(std::string id, std::span<const double> vector) {
  if (vector.size() != dim_)
    throw IndexError("vector for '" + id + "' has length " +
                     std::to_string(vector.size()) + ", index dim is " +
                     std::to_string(dim_));
  if (positions_.count(id)) throw IndexError("duplicate index id '" + id + "'");
  positions_.emplace(id, ids_.size());
  ids_.push_back(std::move(id));
  for (double v : vector) data_.push_back(static_cast<float>(v));
}

std::span<const float> VectorIndex::vector(std::size_t i) const {
  if (i >= size()) throw std::out_of_range("index entry out of range");
  return std::span(data_).subspan(i * dim_, dim_);
}

std::vector<double> VectorIndex::Scores(std::span<const double> query) const {
  if (query.size() != dim_)
    throw IndexError("query has length " + std::to_string(query.size()) +
                     ", index dim is " + std::to_string(dim_));
  std::vector<double> scores(size());
  if (!scores.empty()) kernels::CosineScores(query, data_, dim_, scores);
  return scores;
}

std::vector<ScoredItem> VectorIndex::TopK(std::span<const double> query,
                                          std::size_t k,
                                          ScoreDisplay display) const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const std::vector<double> scores = Scores(query);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t n = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + n, order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return a < b;
                    });
  std::vector<ScoredItem> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = order[i];
    const double offset = display == ScoreDisplay::kPlusOne ? 1.0 : 0.0;
    out.push_back({ids_[j], scores[j] + offset, j});
  }
  return out;
}

std::vector<std::uint8_t> VectorIndex::Serialize() const {
  io::ByteWriter w;
  w.PutBytes(std::span(reinterpret_cast<const std::uint8_t*>(kMagic), 8));
  w.Put(kVersion);
  w.Put(static_cast<std::uint32_t>(dim_));
  w.Put(static_cast<std::uint64_t>(size()));
  w.PutBytes(fingerprint_);
  for (std::size_t i = 0; i < size(); ++i) {
    w.PutString(ids_[i]);
    for (float v : vector(i)) w.Put(v);
  }
  return std::move(w.bytes());
}

VectorIndex VectorIndex::Deserialize(std::span<const std::uint8_t> bytes) {
  io::ByteReader<IndexError> r(bytes);
  const auto magic = r.GetBytes(8, "magic");
  if (!std::equal(magic.begin(), magic.end(),
                  reinterpret_cast<const std::uint8_t*>(kMagic)))
    throw IndexError("bad index magic");
  const auto version = r.Get<std::uint16_t>("version");
  if (version != kVersion)
    throw IndexError("unsupported index version " + std::to_string(version));
  const auto dim = r.Get<std::uint32_t>("dim");
  const auto count = r.Get<std::uint64_t>("count");
  Fingerprint fp;
  const auto fpb = r.GetBytes(fp.size(), "fingerprint");
  std::copy(fpb.begin(), fpb.end(), fp.begin());
  VectorIndex index(dim, fp);
  std::vector<double> v(dim);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::string id = r.GetString("entry id");
    if (index.positions_.count(id))
      throw IndexError("duplicate index id '" + id + "'");
    for (std::uint32_t c = 0; c < dim; ++c)
      index.data_.push_back(r.Get<float>("entry vector"));
    index.positions_.emplace(id, index.ids_.size());
    index.ids_.push_back(std::move(id));
  }
  if (!r.done()) throw IndexError("trailing bytes after the last index entry");
  return index;
}

void VectorIndex::Save(const std::filesystem::path& path) const {
  io::WriteAll(path.string(), Serialize());
}

VectorIndex VectorIndex::Load(const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes;
  try {
    bytes = io::ReadAll(path.string());
  } catch (const std::runtime_error& e) {
    throw IndexError(e.what());
  }
  return Deserialize(bytes);
}

bool VectorIndex::operator==(const VectorIndex& other) const {
  return dim_ == other.dim_ && fingerprint_ == other.fingerprint_ &&
         ids_ == other.ids_ &&
         std::equal(data_.begin(), data_.end(), other.data_.begin(),
                    other.data_.end(), [](float a, float b) {
                      return std::memcmp(&a, &b, sizeof(float)) == 0;
                    });
}

VectorIndex NewIndex(const train::DualEncoderModel& model) {
  return VectorIndex(2 * static_cast<std::size_t>(model.config().dim),
                     model.fingerprint());
}

EmbedReport EmbedCorpus(VectorIndex& index,
                        const std::vector<train::CorpusRecord>& records,
                        const std::filesystem::path& base_dir,
                        const train::GraphOptions& options,
                        const train::Vocabulary& vocab,
                        train::DualEncoderModel& model) {
  if (index.fingerprint() != model.fingerprint())
    throw IndexError("index was built by checkpoint " +
                     train::HexDigest(index.fingerprint()) +
                     ", not by the loaded model " +
                     train::HexDigest(model.fingerprint()));
  if (index.dim() != 2 * static_cast<std::size_t>(model.config().dim))
    throw IndexError("index dim does not match the model");
  EmbedReport report;
  std::vector<std::string> ids;
  std::vector<nn::GraphInput> inputs;
  for (const auto& r : records) {
    try {
      const auto g = train::BuildCodeGraph(r, base_dir, options);
      inputs.push_back(train::Featurize(g, vocab, options.attention_subtokens));
      ids.push_back(r.id);
    } catch (const std::exception& e) {
      report.skipped.emplace_back(r.id, e.what());
    }
  }
  const auto vectors = model.EncodeCode(inputs);
  for (std::size_t i = 0; i < ids.size(); ++i) index.Add(ids[i], vectors[i]);
  report.added = ids.size();
  return report;
}

RankedResult Query(const VectorIndex& index, train::DualEncoderModel& model,
                   const train::Vocabulary& vocab, const std::string& text,
                   std::size_t k, ScoreDisplay display, std::size_t node_cap) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const auto g =
      graph::BuildSummaryGraph(text, graph::RelationSet::Default(), node_cap);
  if (g.nodes.empty()) throw std::invalid_argument("query has no tokens");
  const nn::GraphInput input = train::Featurize(g, vocab);
  const auto q = model.EncodeSummary(std::span(&input, 1));
  return {text, k, index.TopK(q.front(), k, display)};
}

Evaluation EvaluateTestset(train::DualEncoderModel& model,
                           std::span<const train::EncodedPair> pairs) {
  if (pairs.size() < 2)
    throw std::invalid_argument("evaluation needs at least two test pairs");
  std::vector<nn::GraphInput> code, summary;
  for (const auto& p : pairs) {
    code.push_back(p.code);
    summary.push_back(p.summary);
  }
  VectorIndex index = NewIndex(model);
  const auto code_vecs = model.EncodeCode(code);
  for (std::size_t i = 0; i < pairs.size(); ++i)
    index.Add(pairs[i].id, code_vecs[i]);
  const auto queries = model.EncodeSummary(summary);
  Evaluation ev;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    ev.ranks.push_back(RankOf(index.Scores(queries[i]), i));
  ev.metrics = MetricsFromRanks(ev.ranks, pairs.size());
  return ev;
}

}  // namespace gsn::retrieval
