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
#include <cmath>
#include <cstring>
#include <filesystem>
#include <numeric>
#include <random>
#include <unistd.h>

#include "doctest.h"
#include "gsn/index.h"
#include "gsn/metrics.h"

using namespace gsn;
using namespace gsn::retrieval;

namespace {

Fingerprint Fp(std::uint8_t fill) {
  Fingerprint f;
  f.fill(fill);
  return f;
}

std::vector<double> RandomVector(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> v(dim);
  for (double& x : v) x = n(rng);
  return v;
}

// Independent exhaustive ranking: stable sort by descending cosine.
std::vector<std::size_t> OracleOrder(const VectorIndex& index,
                                     const std::vector<double>& q) {
  std::vector<double> scores(index.size());
  double qn = 0.0;
  for (double x : q) qn += x * x;
  for (std::size_t i = 0; i < index.size(); ++i) {
    const auto v = index.vector(i);
    double dot = 0.0, vn = 0.0;
    for (std::size_t c = 0; c < q.size(); ++c) {
      dot += q[c] * v[c];
      vn += double(v[c]) * v[c];
    }
    scores[i] = qn == 0 || vn == 0 ? 0.0 : dot / std::sqrt(qn * vn);
  }
  std::vector<std::size_t> order(index.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  return order;
}

std::filesystem::path TempPath(const std::string& name) {
  return std::filesystem::temp_directory_path() /
         ("gsn_retrieval_test_" + std::to_string(::getpid()) + "_" + name);
}

std::vector<train::EncodedPair> Featurized(const std::vector<train::CorpusRecord>& records,
                                           train::Vocabulary& vocab) {
  auto report = train::BuildExamples(records, ".", graph::RelationSet::Default(), {});
  vocab = train::BuildVocabulary(report.examples, 5000);
  return train::FeaturizeAll(report.examples, vocab, {});
}

train::ModelConfig Small() {
  train::ModelConfig c;
  c.dim = 8;
  c.hops_code = 2;
  c.hops_summary = 1;
  c.heads = 2;
  return c;
}

}  // namespace

TEST_CASE("cosine top-k examples") {
  VectorIndex index(2, Fp(0));
  index.Add("A", std::vector<double>{1, 0});
  index.Add("B", std::vector<double>{0, 1});
  index.Add("C", std::vector<double>{-1, 0});
  const auto top = index.TopK(std::vector<double>{1, 0}, 2);
  REQUIRE(top.size() == 2);
  CHECK(top[0].id == "A");
  CHECK(top[0].score == 1.0);
  CHECK(top[1].id == "B");
  CHECK(top[1].score == 0.0);
  const auto all = index.TopK(std::vector<double>{1, 0}, 50);
  REQUIRE(all.size() == 3);
  CHECK(all[2].id == "C");
  CHECK(all[2].score == -1.0);
  const auto plus = index.TopK(std::vector<double>{1, 0}, 3, ScoreDisplay::kPlusOne);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(plus[i].id == all[i].id);
    CHECK(plus[i].score == all[i].score + 1.0);
  }
  CHECK(index.TopK(std::vector<double>{0, 0}, 3)[0].score == 0.0);
  CHECK_THROWS_AS(index.TopK(std::vector<double>{1, 0, 0}, 2), IndexError);
  CHECK_THROWS_AS(index.TopK(std::vector<double>{1, 0}, 0), std::invalid_argument);
  CHECK_THROWS_AS(index.Add("A", std::vector<double>{1, 1}), IndexError);
  CHECK_THROWS_AS(index.Add("D", std::vector<double>{1}), IndexError);
}

TEST_CASE("ranking equals an exhaustive sort with insertion-order ties") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = 2 + trial % 7;
    VectorIndex index(dim, Fp(1));
    std::vector<std::vector<double>> kept;
    const int n = 5 + trial;
    for (int i = 0; i < n; ++i) {
      // Duplicates create exact ties.
      auto v = (i > 0 && rng() % 4 == 0) ? kept[rng() % kept.size()]
                                         : RandomVector(rng, dim);
      if (rng() % 10 == 0) std::fill(v.begin(), v.end(), 0.0);
      kept.push_back(v);
      index.Add("item" + std::to_string(i), v);
    }
    const auto q = RandomVector(rng, dim);
    const auto oracle = OracleOrder(index, q);
    const auto got = index.TopK(q, static_cast<std::size_t>(n));
    REQUIRE(got.size() == oracle.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].position == oracle[i]);
      if (i > 0) CHECK(got[i - 1].score >= got[i].score);
    }
    const auto first = index.TopK(q, 3);
    for (std::size_t i = 0; i < first.size(); ++i)
      CHECK(first[i].position == got[i].position);

    auto scaled = q;
    for (double& x : scaled) x *= 7.5;
    const auto s = index.TopK(scaled, static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(s[i].position == got[i].position);
      CHECK(s[i].score == doctest::Approx(got[i].score).epsilon(1e-12));
    }
  }
}

TEST_CASE("success rate, MRR and NDCG worked values") {
  const std::vector<std::size_t> ranks{1, 3, 12};
  CHECK(SuccessRateAtK(ranks, 5) == doctest::Approx(2.0 / 3.0));
  const std::vector<std::size_t> ones{1, 1, 1};
  for (std::size_t k : {1, 2, 10}) CHECK(SuccessRateAtK(ones, k) == 1.0);
  CHECK(MeanReciprocalRank(ones) == 1.0);
  CHECK(MeanReciprocalRank(std::vector<std::size_t>{1, 2, 4}) ==
        doctest::Approx(7.0 / 12.0).epsilon(1e-15));
  CHECK(MeanReciprocalRank(std::vector<std::size_t>{2, 2}) == 0.5);
  const std::vector<std::vector<double>> first{{1, 0, 0}};
  CHECK(Ndcg(first, 10) == 1.0);
  const std::vector<std::vector<double>> second{{0, 1, 0}};
  CHECK(Ndcg(second, 10) == doctest::Approx(1.0 / std::log2(3.0)).epsilon(1e-15));
  const std::vector<std::vector<double>> none{{0, 0, 0, 0}};
  CHECK(Ndcg(none, 10) == 0.0);
  // Graded relevance: DCG = (2^1-1)/1 + (2^2-1)/log2(3), IDCG = 3 + 1/log2(3).
  const std::vector<std::vector<double>> graded{{1, 2}};
  CHECK(Ndcg(graded, 10) ==
        doctest::Approx((1 + 3 / std::log2(3.0)) / (3 + 1 / std::log2(3.0))));
  // Beyond p nothing counts.
  const std::vector<std::vector<double>> late{BinaryRelevance(11, 20)};
  CHECK(Ndcg(late, 10) == 0.0);
  CHECK(BinaryRelevance(2, 4) == std::vector<double>{0, 1, 0, 0});
  CHECK_THROWS(MeanReciprocalRank(std::vector<std::size_t>{}));
  CHECK_THROWS(SuccessRateAtK(std::vector<std::size_t>{}, 1));
  CHECK_THROWS(SuccessRateAtK(ones, 0));
  CHECK_THROWS(MeanReciprocalRank(std::vector<std::size_t>{0}));
  CHECK_THROWS(Ndcg(std::vector<std::vector<double>>{}, 10));
}

TEST_CASE("metric properties on random rank sets") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t pool = 2 + rng() % 60;
    std::vector<std::size_t> ranks(1 + rng() % 30);
    for (auto& r : ranks) r = 1 + rng() % pool;
    double prev = 0.0;
    for (std::size_t k = 1; k <= pool; ++k) {
      const double s = SuccessRateAtK(ranks, k);
      CHECK(s >= prev);
      prev = s;
    }
    CHECK(prev == 1.0);
    const auto m = MetricsFromRanks(ranks, pool);
    for (double v : {m.r_at_1, m.r_at_5, m.r_at_10, m.mrr, m.ndcg}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    CHECK(m.mrr <= prev);
    CHECK(m.r_at_1 <= m.r_at_5);
    CHECK(m.r_at_5 <= m.r_at_10);
  }
  CHECK(RankOf(std::vector<double>{0.5, 0.9, 0.5, 0.1}, 2) == 3);
  CHECK(RankOf(std::vector<double>{0.5, 0.9, 0.5, 0.1}, 0) == 2);
  CHECK(RankOf(std::vector<double>{0.5, 0.9, 0.5, 0.1}, 1) == 1);
}

TEST_CASE("random encodings reach the uniform-ranking MRR") {
  const std::size_t n = 50;
  double harmonic = 0.0;
  for (std::size_t i = 1; i <= n; ++i) harmonic += 1.0 / double(i);
  const double expected = harmonic / double(n);
  CHECK(expected == doctest::Approx(0.0900).epsilon(0.01));
  std::mt19937_64 rng(2024);
  double total = 0.0;
  for (int resample = 0; resample < 100; ++resample) {
    VectorIndex index(16, Fp(2));
    for (std::size_t i = 0; i < n; ++i)
      index.Add(std::to_string(i), RandomVector(rng, 16));
    std::vector<std::size_t> ranks;
    for (std::size_t i = 0; i < n; ++i)
      ranks.push_back(RankOf(index.Scores(RandomVector(rng, 16)), i));
    total += MeanReciprocalRank(ranks);
  }
  CHECK(std::abs(total / 100.0 - expected) < 0.03);
}

TEST_CASE("a one-hot model scores perfectly") {
  const std::size_t n = 12;
  train::ModelConfig c;
  c.dim = static_cast<int>(n + 2);
  c.heads = 1;
  c.biggnn_code = c.biggnn_summary = false;
  train::DualEncoderModel model(c, n + 2, 1);
  for (nn::EncoderParams* p : {&model.code(), &model.summary()}) {
    p->embedding = ad::Tensor::Identity(n + 2);
    p->attn_value = ad::Tensor::Identity(n + 2);
    p->attn_output = ad::Tensor::Identity(n + 2);
  }
  std::vector<train::EncodedPair> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    const int token = static_cast<int>(i + 2);
    pairs.push_back({"p" + std::to_string(i), {{token}, {}, {0}}, {{token}, {}, {0}}});
  }
  const auto ev = EvaluateTestset(model, pairs);
  CHECK(ev.metrics.r_at_1 == 1.0);
  CHECK(ev.metrics.r_at_5 == 1.0);
  CHECK(ev.metrics.r_at_10 == 1.0);
  CHECK(ev.metrics.mrr == 1.0);
  CHECK(ev.metrics.ndcg == 1.0);
  CHECK_THROWS(EvaluateTestset(model, std::span(pairs.data(), 1)));
}

TEST_CASE("test-set evaluation equals top-k composed with the metric functions") {
  train::Vocabulary vocab;
  const auto pairs = Featurized(train::SyntheticCorpus(30, 5), vocab);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    train::DualEncoderModel model(Small(), vocab.size(), seed);
    const auto ev = EvaluateTestset(model, pairs);

    VectorIndex index = NewIndex(model);
    std::vector<nn::GraphInput> code, summary;
    for (const auto& p : pairs) {
      code.push_back(p.code);
      summary.push_back(p.summary);
    }
    const auto cv = model.EncodeCode(code);
    for (std::size_t i = 0; i < pairs.size(); ++i) index.Add(pairs[i].id, cv[i]);
    const auto sv = model.EncodeSummary(summary);
    std::vector<std::size_t> ranks;
    std::vector<std::vector<double>> rel;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto top = index.TopK(sv[i], pairs.size());
      std::vector<double> r;
      for (std::size_t j = 0; j < top.size(); ++j) {
        r.push_back(top[j].id == pairs[i].id ? 1.0 : 0.0);
        if (top[j].id == pairs[i].id) ranks.push_back(j + 1);
      }
      rel.push_back(r);
    }
    CHECK(ev.ranks == ranks);
    CHECK(ev.metrics.r_at_1 == SuccessRateAtK(ranks, 1));
    CHECK(ev.metrics.r_at_5 == SuccessRateAtK(ranks, 5));
    CHECK(ev.metrics.r_at_10 == SuccessRateAtK(ranks, 10));
    CHECK(ev.metrics.mrr == MeanReciprocalRank(ranks));
    CHECK(ev.metrics.ndcg == doctest::Approx(Ndcg(rel, 10)).epsilon(1e-15));
  }
}

TEST_CASE("index files") {
  train::Vocabulary vocab;
  auto records = train::SyntheticCorpus(20, 9);
  Featurized(records, vocab);
  train::DualEncoderModel model(Small(), vocab.size(), 4);
  VectorIndex index = NewIndex(model);
  records.push_back({"broken", "x = = 1", "", "does nothing", ""});
  const auto report = EmbedCorpus(index, records, ".", {}, vocab, model);
  CHECK(report.added == 20);
  REQUIRE(report.skipped.size() == 1);
  CHECK(report.skipped[0].first == "broken");
  CHECK(index.size() == 20);
  CHECK(index.dim() == 16);

  const auto bytes = index.Serialize();
  CHECK(std::memcmp(bytes.data(), "GSNVIDX1", 8) == 0);
  const auto fp = model.fingerprint();
  CHECK(std::memcmp(bytes.data() + 8 + 2 + 4 + 8, fp.data(), 32) == 0);
  const auto path = TempPath("a.idx");
  index.Save(path);
  const auto loaded = VectorIndex::Load(path);
  CHECK(loaded == index);
  const auto q = model.EncodeSummary(std::vector<nn::GraphInput>{
      train::FeaturizeAll(train::BuildExamples({records[3]}, ".",
                                               graph::RelationSet::Default(), {})
                              .examples,
                          vocab, {})[0]
          .summary});
  const auto r1 = index.TopK(q[0], 20), r2 = loaded.TopK(q[0], 20);
  for (std::size_t i = 0; i < r1.size(); ++i) {
    CHECK(r1[i].id == r2[i].id);
    CHECK(r1[i].score == r2[i].score);
  }

  VectorIndex again = NewIndex(model);
  EmbedCorpus(again, records, ".", {}, vocab, model);
  CHECK(again.Serialize() == bytes);

  train::DualEncoderModel other(Small(), vocab.size(), 5);
  CHECK_THROWS_AS(EmbedCorpus(index, records, ".", {}, vocab, other), IndexError);
  VectorIndex dup = NewIndex(model);
  EmbedCorpus(dup, {records[0]}, ".", {}, vocab, model);
  CHECK_THROWS_AS(EmbedCorpus(dup, {records[0]}, ".", {}, vocab, model), IndexError);

  VectorIndex empty = NewIndex(model);
  EmbedCorpus(empty, {}, ".", {}, vocab, model);
  CHECK(empty.size() == 0);
  const auto empty_path = TempPath("empty.idx");
  empty.Save(empty_path);
  const auto empty_loaded = VectorIndex::Load(empty_path);
  CHECK(empty_loaded == empty);
  CHECK(empty_loaded.TopK(q[0], 10).empty());

  auto bad = bytes;
  bad[3] = '?';
  CHECK_THROWS_AS(VectorIndex::Deserialize(bad), IndexError);
  for (std::size_t cut = 0; cut < bytes.size(); cut += 1 + cut / 4)
    CHECK_THROWS_AS(VectorIndex::Deserialize(std::span(bytes.data(), cut)), IndexError);
  auto longer = bytes;
  longer.push_back(1);
  CHECK_THROWS_AS(VectorIndex::Deserialize(longer), IndexError);
  CHECK_THROWS_AS(VectorIndex::Load(TempPath("missing.idx")), IndexError);
  std::filesystem::remove(path);
  std::filesystem::remove(empty_path);
}

TEST_CASE("free-text queries") {
  train::Vocabulary vocab;
  const auto records = train::SyntheticCorpus(15, 3);
  Featurized(records, vocab);
  train::DualEncoderModel model(Small(), vocab.size(), 4);
  VectorIndex index = NewIndex(model);
  EmbedCorpus(index, records, ".", {}, vocab, model);
  const auto r = Query(index, model, vocab, "compute the total price", 10);
  CHECK(r.k == 10);
  CHECK(r.query == "compute the total price");
  REQUIRE(r.items.size() == 10);
  for (std::size_t i = 1; i < r.items.size(); ++i)
    CHECK(r.items[i - 1].score >= r.items[i].score);
  const auto plus = Query(index, model, vocab, "compute the total price", 10,
                          ScoreDisplay::kPlusOne);
  for (std::size_t i = 0; i < r.items.size(); ++i) {
    CHECK(plus.items[i].id == r.items[i].id);
    CHECK(plus.items[i].score == r.items[i].score + 1.0);
  }
  CHECK(Query(index, model, vocab, "x", 100).items.size() == 15);
  CHECK_THROWS(Query(index, model, vocab, "  ", 10));
  CHECK_THROWS(Query(index, model, vocab, "x", 0));
}
