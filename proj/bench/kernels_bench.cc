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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "gsn/encoders.h"
#include "gsn/kernels.h"

namespace {

using namespace gsn::kernels;

std::vector<double> Random(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

template <void (*Kernel)(ConstMatrixView, ConstMatrixView, MatrixView, bool)>
void BM_Gemm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = Random(n * n, 1), b = Random(n * n, 2);
  std::vector<double> c(n * n);
  for (auto _ : state) {
    Kernel({a.data(), n, n}, {b.data(), n, n}, {c.data(), n, n}, false);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n * n * n));
}

template <void (*Kernel)(std::span<const double>, std::span<const float>,
                         std::size_t, std::span<double>)>
void BM_Cosine(benchmark::State& state) {
  const auto count = static_cast<std::size_t>(state.range(0));
  constexpr std::size_t dim = 256;
  const auto q = Random(dim, 3);
  const auto raw = Random(count * dim, 4);
  const std::vector<float> vectors(raw.begin(), raw.end());
  std::vector<double> scores(count);
  for (auto _ : state) {
    Kernel(q, vectors, dim, scores);
    benchmark::DoNotOptimize(scores.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(count));
}

void BM_EncodeOne(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::mt19937_64 rng(5);
  auto params = gsn::nn::EncoderParams::Init(64, d, rng);
  gsn::nn::GraphInput g;
  std::uniform_int_distribution<int> tok(2, 63), node(0, 79);
  for (int i = 0; i < 80; ++i) g.node_tokens.push_back(tok(rng));
  for (int e = 0; e < 160; ++e) g.edges.emplace_back(node(rng), node(rng));
  for (int i = 0; i < 80; i += 2) g.sequence.push_back(i);
  const gsn::nn::EncoderConfig cfg{d, 4, 2, true, true, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(gsn::nn::EncodeOne(params, cfg, g));
}

BENCHMARK(BM_Gemm<serial::Gemm>)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_Gemm<parallel::Gemm>)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_Cosine<serial::CosineScores>)->Arg(1000)->Arg(20000);
BENCHMARK(BM_Cosine<parallel::CosineScores>)->Arg(1000)->Arg(20000);
BENCHMARK(BM_EncodeOne)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
