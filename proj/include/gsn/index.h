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

#include <cstddef>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gsn/corpus.h"
#include "gsn/metrics.h"
#include "gsn/model.h"

namespace gsn::retrieval {

using train::Fingerprint;

class IndexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ScoreDisplay { kRaw, kPlusOne };

struct ScoredItem {
  std::string id;
  double score = 0.0;
  std::size_t position = 0;  // insertion index
};

struct RankedResult {
  std::string query;
  std::size_t k = 0;
  std::vector<ScoredItem> items;
};

// Program vectors (32-bit floats) in insertion order, tagged with the
// fingerprint of the checkpoint that produced them.
class VectorIndex {
 public:
  VectorIndex() = default;
  VectorIndex(std::size_t dim, const Fingerprint& fingerprint);

  // Throws IndexError on a dimension mismatch or duplicate id.
  void Add(std::string id, std::span<const double> vector);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  const Fingerprint& fingerprint() const { return fingerprint_; }
  const std::string& id(std::size_t i) const { return ids_.at(i); }
  std::span<const float> vector(std::size_t i) const;
  std::span<const float> data() const { return data_; }

  // Cosine similarity of `query` against every entry (zero norm scores 0).
  std::vector<double> Scores(std::span<const double> query) const;
  // Exact top-k by cosine; ties go to the earlier entry. Throws IndexError
  // on a dimension mismatch and std::invalid_argument for k < 1.
  std::vector<ScoredItem> TopK(std::span<const double> query, std::size_t k,
                               ScoreDisplay display = ScoreDisplay::kRaw) const;

  std::vector<std::uint8_t> Serialize() const;
  static VectorIndex Deserialize(std::span<const std::uint8_t> bytes);
  void Save(const std::filesystem::path& path) const;
  static VectorIndex Load(const std::filesystem::path& path);

  bool operator==(const VectorIndex& other) const;

 private:
  std::size_t dim_ = 0;
  Fingerprint fingerprint_{};
  std::vector<std::string> ids_;
  std::vector<float> data_;
  std::unordered_map<std::string, std::size_t> positions_;
};

struct EmbedReport {
  std::vector<std::pair<std::string, std::string>> skipped;
  std::size_t added = 0;
};

// Encodes every record's program with the model and appends it to `index`.
// Records whose graphs cannot be built are skipped and reported. Throws
// IndexError when the index was built by a different checkpoint.
EmbedReport EmbedCorpus(VectorIndex& index,
                        const std::vector<train::CorpusRecord>& records,
                        const std::filesystem::path& base_dir,
                        const train::GraphOptions& options,
                        const train::Vocabulary& vocab,
                        train::DualEncoderModel& model);

VectorIndex NewIndex(const train::DualEncoderModel& model);

// Encodes free text as a summary (linear dependency parse) and ranks the
// index against it.
RankedResult Query(const VectorIndex& index, train::DualEncoderModel& model,
                   const train::Vocabulary& vocab, const std::string& text,
                   std::size_t k, ScoreDisplay display = ScoreDisplay::kRaw,
                   std::size_t node_cap = graph::kDefaultNodeCap);

struct Evaluation {
  Metrics metrics;
  std::vector<std::size_t> ranks;  // first-hit rank per query
};

// Indexes all test programs, then ranks each summary's own program against
// the whole pool. Needs at least two pairs.
Evaluation EvaluateTestset(train::DualEncoderModel& model,
                           std::span<const train::EncodedPair> pairs);

}  // namespace gsn::retrieval
