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

#include "gsn/metrics.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace gsn::retrieval {
namespace {

void CheckRanks(std::span<const std::size_t> ranks) {
  if (ranks.empty()) throw std::invalid_argument("empty query set");
  for (std::size_t r : ranks)
    if (r < 1) throw std::invalid_argument("ranks are 1-based");
}

double Dcg(std::span<const double> rel, std::size_t p) {
  double s = 0.0;
  const std::size_t n = std::min(p, rel.size());
  for (std::size_t i = 0; i < n; ++i)
    s += (std::exp2(rel[i]) - 1.0) / std::log2(static_cast<double>(i) + 2.0);
  return s;
}

}  // namespace

double SuccessRateAtK(std::span<const std::size_t> first_ranks,
                      std::size_t k) {
  CheckRanks(first_ranks);
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const auto hits = std::count_if(first_ranks.begin(), first_ranks.end(),
                                  [k](std::size_t r) { return r <= k; });
  return static_cast<double>(hits) / static_cast<double>(first_ranks.size());
}

double MeanReciprocalRank(std::span<const std::size_t> first_ranks) {
  CheckRanks(first_ranks);
  double s = 0.0;
  for (std::size_t r : first_ranks) s += 1.0 / static_cast<double>(r);
  return s / static_cast<double>(first_ranks.size());
}

double Ndcg(std::span<const std::vector<double>> relevance_by_position,
            std::size_t p) {
  if (relevance_by_position.empty())
    throw std::invalid_argument("empty query set");
  if (p < 1) throw std::invalid_argument("p must be >= 1");
  double total = 0.0;
  for (const auto& rel : relevance_by_position) {
    for (double r : rel)
      if (r < 0.0) throw std::invalid_argument("negative relevance");
    std::vector<double> ideal(rel);
    std::sort(ideal.begin(), ideal.end(), std::greater<>());
    const double idcg = Dcg(ideal, p);
    if (idcg > 0.0) total += Dcg(rel, p) / idcg;
  }
  return total / static_cast<double>(relevance_by_position.size());
}

std::vector<double> BinaryRelevance(std::size_t first_rank,
                                    std::size_t pool_size) {
  if (first_rank < 1 || first_rank > pool_size)
    throw std::invalid_argument("rank outside pool");
  std::vector<double> rel(pool_size, 0.0);
  rel[first_rank - 1] = 1.0;
  return rel;
}

std::size_t RankOf(std::span<const double> scores, std::size_t target) {
  if (target >= scores.size()) throw std::out_of_range("target outside pool");
  const double t = scores[target];
  std::size_t rank = 1;
  for (std::size_t j = 0; j < scores.size(); ++j)
    if (scores[j] > t || (scores[j] == t && j < target)) ++rank;
  return rank;
}

Metrics MetricsFromRanks(std::span<const std::size_t> first_ranks,
                         std::size_t pool_size, std::size_t ndcg_p) {
  Metrics m;
  m.r_at_1 = SuccessRateAtK(first_ranks, 1);
  m.r_at_5 = SuccessRateAtK(first_ranks, 5);
  m.r_at_10 = SuccessRateAtK(first_ranks, 10);
  m.mrr = MeanReciprocalRank(first_ranks);
  std::vector<std::vector<double>> rel;
  rel.reserve(first_ranks.size());
  for (std::size_t r : first_ranks) rel.push_back(BinaryRelevance(r, pool_size));
  m.ndcg = Ndcg(rel, ndcg_p);
  return m;
}

}  // namespace gsn::retrieval
