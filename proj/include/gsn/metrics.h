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
#include <span>
#include <vector>

namespace gsn::retrieval {

// Fraction of queries whose first correct result sits at rank <= k.
double SuccessRateAtK(std::span<const std::size_t> first_ranks, std::size_t k);

// Mean reciprocal rank of the first correct result.
double MeanReciprocalRank(std::span<const std::size_t> first_ranks);

// Mean over queries of DCG_p / IDCG_p with gain (2^rel - 1) / log2(i + 1).
// Each inner list holds graded relevances by result position (position 1
// first). Queries with no relevant item contribute 0.
double Ndcg(std::span<const std::vector<double>> relevance_by_position,
            std::size_t p);

// Binary-relevance relevance list for a query whose only relevant item is at
// `first_rank` in a pool of `pool_size`.
std::vector<double> BinaryRelevance(std::size_t first_rank,
                                    std::size_t pool_size);

// 1-based rank of `target` when `scores` are sorted descending with ties
// broken by ascending index.
std::size_t RankOf(std::span<const double> scores, std::size_t target);

struct Metrics {
  double r_at_1 = 0.0;
  double r_at_5 = 0.0;
  double r_at_10 = 0.0;
  double mrr = 0.0;
  double ndcg = 0.0;
};

// All five metrics from first-hit ranks in a pool of `pool_size` items.
Metrics MetricsFromRanks(std::span<const std::size_t> first_ranks,
                         std::size_t pool_size, std::size_t ndcg_p = 10);

}  // namespace gsn::retrieval
