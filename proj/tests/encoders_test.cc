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
#include <numeric>
#include <random>

#include "doctest.h"
#include "gsn/encoders.h"
#include "support/gradient_cases.h"

using namespace gsn;
using ad::Tape;
using ad::Tensor;
using ad::Var;
using testing::RandomTensor;

namespace {

using Mat = std::vector<std::vector<double>>;

// Plain-loop reference implementation of the encoder, independent of the
// tape and kernels.
struct Reference {
  const nn::EncoderParams& p;
  int heads;

  static std::vector<double> Affine(const std::vector<double>& x,
                                    const Tensor& w, const Tensor* b) {
    std::vector<double> y(w.cols(), 0.0);
    for (std::size_t j = 0; j < w.cols(); ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * w(i, j);
      y[j] = s + (b ? (*b)(0, j) : 0.0);
    }
    return y;
  }
  static double Sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }
  static std::vector<double> Join(std::initializer_list<std::vector<double>> parts) {
    std::vector<double> out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
  }

  std::vector<double> Gru(const std::vector<double>& h,
                          const std::vector<double>& m) const {
    const auto mh = Join({m, h});
    auto z = Affine(mh, p.gru_update_w, &p.gru_update_b);
    auto r = Affine(mh, p.gru_reset_w, &p.gru_reset_b);
    std::vector<double> rh(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) rh[i] = Sig(r[i]) * h[i];
    auto c = Affine(Join({m, rh}), p.gru_cand_w, &p.gru_cand_b);
    std::vector<double> out(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
      const double zi = Sig(z[i]);
      out[i] = (1 - zi) * h[i] + zi * std::tanh(c[i]);
    }
    return out;
  }

  std::vector<double> Fuse(const std::vector<double>& a,
                           const std::vector<double>& b) const {
    std::vector<double> prod(a.size()), diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      prod[i] = a[i] * b[i];
      diff[i] = a[i] - b[i];
    }
    auto z = Affine(Join({a, b, prod, diff}), p.fuse_w, &p.fuse_b);
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      out[i] = Sig(z[i]) * a[i] + (1 - Sig(z[i])) * b[i];
    return out;
  }

  std::vector<double> Row(int token) const {
    std::vector<double> r(p.embedding.cols());
    for (std::size_t c = 0; c < r.size(); ++c) r[c] = p.embedding(token, c);
    return r;
  }

  std::vector<double> Graph(const nn::GraphInput& g, int hops) const {
    const std::size_t n = g.node_tokens.size(), d = p.embedding.cols();
    Mat h(n);
    for (std::size_t v = 0; v < n; ++v) h[v] = Row(g.node_tokens[v]);
    for (int k = 0; k < hops; ++k) {
      Mat in(n, std::vector<double>(d, 0.0)), out = in, next(n);
      for (const auto& [s, t] : g.edges)
        for (std::size_t c = 0; c < d; ++c) {
          in[t][c] += h[s][c];
          out[s][c] += h[t][c];
        }
      for (std::size_t v = 0; v < n; ++v) next[v] = Gru(h[v], Fuse(in[v], out[v]));
      h = next;
    }
    std::vector<double> pooled(d, -INFINITY);
    for (std::size_t v = 0; v < n; ++v) {
      auto y = Affine(h[v], p.readout_w, &p.readout_b);
      for (std::size_t c = 0; c < d; ++c)
        pooled[c] = std::max(pooled[c], std::max(0.0, y[c]));
    }
    return pooled;
  }

  std::vector<double> Sequence(const nn::GraphInput& g) const {
    const std::size_t l = g.sequence.size(), d = p.embedding.cols();
    const std::size_t dk = d / heads;
    Mat q(l), k(l), v(l);
    for (std::size_t i = 0; i < l; ++i) {
      const auto x = Row(g.node_tokens[g.sequence[i]]);
      q[i] = Affine(x, p.attn_query, nullptr);
      k[i] = Affine(x, p.attn_key, nullptr);
      v[i] = Affine(x, p.attn_value, nullptr);
    }
    Mat concat(l, std::vector<double>(d, 0.0));
    for (int h = 0; h < heads; ++h) {
      for (std::size_t i = 0; i < l; ++i) {
        std::vector<double> s(l);
        for (std::size_t j = 0; j < l; ++j) {
          double dot = 0.0;
          for (std::size_t c = h * dk; c < (h + 1) * dk; ++c) dot += q[i][c] * k[j][c];
          s[j] = dot / std::sqrt(double(dk));
        }
        const double mx = *std::max_element(s.begin(), s.end());
        double total = 0.0;
        for (double& x : s) total += (x = std::exp(x - mx));
        for (std::size_t j = 0; j < l; ++j)
          for (std::size_t c = h * dk; c < (h + 1) * dk; ++c)
            concat[i][c] += s[j] / total * v[j][c];
      }
    }
    std::vector<double> mean(d, 0.0);
    for (std::size_t i = 0; i < l; ++i) {
      auto o = Affine(concat[i], p.attn_output, nullptr);
      for (std::size_t c = 0; c < d; ++c) mean[c] += o[c] / double(l);
    }
    return mean;
  }
};

nn::EncoderParams ZeroParams(std::size_t vocab, int d) {
  std::mt19937_64 rng(1);
  nn::EncoderParams p = nn::EncoderParams::Init(vocab, d, rng);
  for (auto& [name, t] : p.Named())
    if (name != "embedding") std::fill(t->values().begin(), t->values().end(), 0.0);
  return p;
}

nn::GraphInput RandomGraph(std::mt19937_64& rng, int n, int edges, int vocab) {
  nn::GraphInput g;
  std::uniform_int_distribution<int> node(0, n - 1), tok(2, vocab - 1);
  for (int i = 0; i < n; ++i) g.node_tokens.push_back(tok(rng));
  for (int e = 0; e < edges; ++e) g.edges.emplace_back(node(rng), node(rng));
  for (int i = 0; i < n; i += 2) g.sequence.push_back(i);
  return g;
}

// Relabels node i as perm[i].
nn::GraphInput Permute(const nn::GraphInput& g, const std::vector<int>& perm) {
  nn::GraphInput out;
  out.node_tokens.resize(g.node_tokens.size());
  for (std::size_t i = 0; i < perm.size(); ++i)
    out.node_tokens[perm[i]] = g.node_tokens[i];
  for (const auto& [s, d] : g.edges) out.edges.emplace_back(perm[s], perm[d]);
  for (int s : g.sequence) out.sequence.push_back(perm[s]);
  return out;
}

Var RowOf(Tape& t, std::vector<double> v) {
  const std::size_t n = v.size();
  return t.Constant(Tensor({1, n}, std::move(v)));
}

}  // namespace

TEST_CASE("initial states are embedding rows") {
  std::mt19937_64 rng(3);
  auto params = nn::EncoderParams::Init(6, 4, rng);
  Tape tape;
  auto p = nn::Bind(tape, params);
  const std::vector<int> tokens{2, 1, 2};
  Var h0 = nn::InitNodeStates(p, tokens, 0.3, nn::RunMode{});
  for (std::size_t c = 0; c < 4; ++c) {
    CHECK(h0.value()(0, c) == params.embedding(2, c));
    CHECK(h0.value()(1, c) == params.embedding(1, c));
    CHECK(h0.value()(0, c) == h0.value()(2, c));
  }
}

TEST_CASE("directional aggregation") {
  Tape tape;
  Var h = tape.Constant(Tensor::Matrix(4, 2, {1, 2, 3, 4, 5, 6, 7, 8}));
  const std::vector<int> src{0, 1, 3}, dst{2, 2, 1};
  Var in = nn::AggregateDirectional(h, src, dst, nn::Direction::kIncoming);
  Var out = nn::AggregateDirectional(h, src, dst, nn::Direction::kOutgoing);
  CHECK(in.value()(2, 0) == 1 + 3);
  CHECK(in.value()(2, 1) == 2 + 4);
  CHECK(in.value()(1, 0) == 7);
  CHECK(in.value()(0, 0) == 0);
  CHECK(in.value()(3, 1) == 0);
  CHECK(out.value()(0, 0) == 5);
  CHECK(out.value()(1, 1) == 6);
  CHECK(out.value()(3, 0) == 3);
  CHECK(out.value()(2, 0) == 0);
  Var none = nn::AggregateDirectional(h, {}, {}, nn::Direction::kIncoming);
  for (double v : none.value().values()) CHECK(v == 0.0);
}

TEST_CASE("gated fusion") {
  std::mt19937_64 rng(5);
  auto params = nn::EncoderParams::Init(4, 3, rng);
  params.fuse_b = RandomTensor(1, 3, rng);
  for (int trial = 0; trial < 20; ++trial) {
    Tape tape;
    auto p = nn::Bind(tape, params);
    Var a = tape.Constant(RandomTensor(2, 3, rng, -3, 3));
    Var same = nn::FuseGated(a, a, p.fuse_w, p.fuse_b);
    for (std::size_t i = 0; i < 6; ++i)
      CHECK(same.value().values()[i] == a.value().values()[i]);
  }
  auto zero = ZeroParams(4, 3);
  Tape tape;
  auto p = nn::Bind(tape, zero);
  Var a = RowOf(tape, {1, -2, 4}), b = RowOf(tape, {3, 2, 0});
  Var mid = nn::FuseGated(a, b, p.fuse_w, p.fuse_b);
  CHECK(mid.value()(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(mid.value()(0, 1) == doctest::Approx(0.0));
  CHECK(mid.value()(0, 2) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS(nn::FuseGated(a, RowOf(tape, {1, 2}), p.fuse_w, p.fuse_b));
}

TEST_CASE("gru cell with zero weights halves the state") {
  auto zero = ZeroParams(4, 3);
  Tape tape;
  auto p = nn::Bind(tape, zero);
  Var h = RowOf(tape, {1, -2, 0.5}), m = RowOf(tape, {7, 7, 7});
  Var out = nn::GruCell(h, m, p);
  CHECK(out.value()(0, 0) == 0.5);
  CHECK(out.value()(0, 1) == -1.0);
  CHECK(out.value()(0, 2) == 0.25);
  Var from_zero = nn::GruCell(RowOf(tape, {0, 0, 0}), m, p);
  for (double v : from_zero.value().values()) CHECK(v == 0.0);
  CHECK_THROWS(nn::GruCell(h, RowOf(tape, {1, 2}), p));
}

TEST_CASE("encoder operations match finite differences") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    for (const auto& c : testing::EncoderCases(seed)) {
      CAPTURE(c.name);
      CHECK(ad::FiniteDifferenceCheck(c.f, c.x) < 1e-4);
    }
  }
}

TEST_CASE("encoding matches a plain-loop reference") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = trial % 2 ? 8 : 6, heads = trial % 2 ? 4 : 2;
    auto params = nn::EncoderParams::Init(12, d, rng);
    params.fuse_b = RandomTensor(1, d, rng);
    params.gru_update_b = RandomTensor(1, d, rng);
    params.readout_b = RandomTensor(1, d, rng);
    const auto g = RandomGraph(rng, 3 + trial, 2 * trial + 2, 12);
    nn::EncoderConfig cfg{d, 1 + trial % 3, heads, true, true, 0.3};
    const auto got = nn::EncodeOne(params, cfg, g);
    Reference ref{params, heads};
    const auto hg = ref.Graph(g, cfg.hops);
    const auto hc = ref.Sequence(g);
    REQUIRE(got.size() == std::size_t(2 * d));
    for (int c = 0; c < d; ++c) {
      CHECK(got[c] == doctest::Approx(hg[c]).epsilon(1e-10));
      CHECK(got[d + c] == doctest::Approx(hc[c]).epsilon(1e-10));
    }
  }
}

TEST_CASE("single-node graph reduces to repeated GRU updates") {
  std::mt19937_64 rng(9);
  auto params = nn::EncoderParams::Init(5, 4, rng);
  const nn::GraphInput g{{3}, {}, {0}};
  const nn::EncoderConfig cfg{4, 3, 2, true, true, 0.0};
  const auto got = nn::EncodeOne(params, cfg, g);
  Reference ref{params, 2};
  std::vector<double> h = ref.Row(3);
  for (int k = 0; k < 3; ++k) h = ref.Gru(h, std::vector<double>(4, 0.0));
  const auto y = Reference::Affine(h, params.readout_w, &params.readout_b);
  for (int c = 0; c < 4; ++c)
    CHECK(got[c] == doctest::Approx(std::max(0.0, y[c])).epsilon(1e-12));
}

TEST_CASE("GGNN hop equals BiGGNN with pass-through incoming fusion") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    auto params = nn::EncoderParams::Init(10, 5, rng);
    const auto g = RandomGraph(rng, 6, 8, 10);
    const auto batch = nn::GraphBatch::Make(std::span(&g, 1));
    Tape tape;
    auto p = nn::Bind(tape, params);
    Var h0 = nn::InitNodeStates(p, batch.node_tokens, 0.0, nn::RunMode{});
    Var bi = nn::BiGgnnNodeStates(h0, batch.edge_src, batch.edge_dst, 1, p,
                                  nn::FusionMode::kIncomingOnly);
    Var gg = nn::GgnnHop(h0, batch.edge_src, batch.edge_dst,
                         tape.Constant(Tensor::Identity(5)), p);
    for (std::size_t i = 0; i < bi.value().numel(); ++i)
      CHECK(bi.value().values()[i] == gg.value().values()[i]);
  }
  auto zero = ZeroParams(4, 3);
  Tape tape;
  auto p = nn::Bind(tape, zero);
  Var h = tape.Constant(Tensor::Matrix(2, 3, {1, 2, 3, -4, 5, 6}));
  const std::vector<int> src{0}, dst{1};
  Var out = nn::GgnnHop(h, src, dst, tape.Constant(Tensor::Zeros(3, 3)), p);
  for (std::size_t i = 0; i < 6; ++i)
    CHECK(out.value().values()[i] == 0.5 * h.value().values()[i]);
  CHECK_THROWS(nn::GgnnHop(h, src, dst, tape.Constant(Tensor::Zeros(2, 2)), p));
}

TEST_CASE("GCN layer") {
  Tape tape;
  Var h = tape.Constant(Tensor::Matrix(3, 2, {1, -2, 3, 4, -5, 6}));
  const std::vector<int> src{0}, dst{1};
  Var out = nn::GcnLayer(h, src, dst, tape.Constant(Tensor::Identity(2)));
  // Node 2 is isolated: c = 1 and h' = ReLU(h).
  CHECK(out.value()(2, 0) == 0.0);
  CHECK(out.value()(2, 1) == 6.0);
  // Nodes 0 and 1 each have two members in their neighbourhood.
  CHECK(out.value()(0, 0) == doctest::Approx((1 + 3) / 2.0));
  CHECK(out.value()(0, 1) == doctest::Approx((-2 + 4) / 2.0));
  CHECK(out.value()(1, 0) == doctest::Approx((1 + 3) / 2.0));
  Var zero = nn::GcnLayer(h, src, dst, tape.Constant(Tensor::Zeros(2, 2)));
  for (double v : zero.value().values()) CHECK(v == 0.0);
  CHECK_THROWS(nn::GcnLayer(h, src, dst, tape.Constant(Tensor::Zeros(3, 2))));

  std::mt19937_64 rng(4);
  const auto g = RandomGraph(rng, 7, 10, 5);
  std::vector<int> perm(7);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  const auto pg = Permute(g, perm);
  const Tensor states = RandomTensor(7, 3, rng);
  Tensor permuted({7, 3});
  for (int i = 0; i < 7; ++i)
    for (int c = 0; c < 3; ++c) permuted(perm[i], c) = states(i, c);
  const Tensor w = RandomTensor(3, 3, rng);
  auto split = [](const nn::GraphInput& x, std::vector<int>& s, std::vector<int>& d) {
    for (auto [a, b] : x.edges) {
      s.push_back(a);
      d.push_back(b);
    }
  };
  std::vector<int> s1, d1, s2, d2;
  split(g, s1, d1);
  split(pg, s2, d2);
  Var a = nn::GcnLayer(tape.Constant(states), s1, d1, tape.Constant(w));
  Var b = nn::GcnLayer(tape.Constant(permuted), s2, d2, tape.Constant(w));
  for (int i = 0; i < 7; ++i)
    for (int c = 0; c < 3; ++c)
      CHECK(a.value()(i, c) == doctest::Approx(b.value()(perm[i], c)).epsilon(1e-12));
}

TEST_CASE("receptive field on a chain") {
  const std::vector<std::pair<int, int>> chain{{0, 1}, {1, 2}, {2, 3}};
  CHECK(nn::ReceptiveField(4, chain, 0, 1) == std::set<int>{0, 1});
  CHECK(nn::ReceptiveField(4, chain, 0, 2) == std::set<int>{0, 1, 2});
  CHECK(nn::ReceptiveField(4, chain, 0, 3) == std::set<int>{0, 1, 2, 3});
  CHECK(nn::ReceptiveField(4, chain, 3, 1) == std::set<int>{2, 3});
  CHECK_THROWS_AS(nn::ReceptiveField(4, chain, 4, 1), std::out_of_range);
}

TEST_CASE("perturbations outside the receptive field leave node states intact") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 9;
    auto params = nn::EncoderParams::Init(n + 2, 4, rng);
    nn::GraphInput g;
    for (int i = 0; i < n; ++i) g.node_tokens.push_back(i + 2);
    std::uniform_int_distribution<int> node(0, n - 1);
    for (int e = 0; e < 6; ++e) g.edges.emplace_back(node(rng), node(rng));
    g.sequence = {0, n - 1};
    const int hops = 1 + trial % 3;
    const int v = node(rng);
    const auto field = nn::ReceptiveField(n, g.edges, v, hops);
    int far = -1;
    for (int u = 0; u < n; ++u)
      if (!field.count(u)) far = u;
    if (far < 0) continue;

    auto node_states = [&](nn::EncoderParams& ps) {
      const auto batch = nn::GraphBatch::Make(std::span(&g, 1));
      Tape tape;
      auto p = nn::Bind(tape, ps);
      Var h0 = nn::InitNodeStates(p, batch.node_tokens, 0.0, nn::RunMode{});
      Var hk = nn::BiGgnnNodeStates(h0, batch.edge_src, batch.edge_dst, hops, p);
      Var fc = ad::Relu(ad::Add(ad::MatMul(hk, p.readout_w), p.readout_b));
      return std::pair{hk.value(), fc.value()};
    };
    auto before = node_states(params);
    auto perturbed = params;
    for (std::size_t c = 0; c < 4; ++c) perturbed.embedding(far + 2, c) += 0.5;
    auto after = node_states(perturbed);
    for (std::size_t c = 0; c < 4; ++c)
      CHECK(before.first(v, c) == after.first(v, c));

    // h^g moves only in coordinates whose max is held by a node the
    // perturbation can reach.
    const auto reached = nn::ReceptiveField(n, g.edges, far, hops);
    nn::EncoderConfig cfg{4, hops, 2, true, false, 0.0};
    const auto hg0 = nn::EncodeOne(params, cfg, g);
    const auto hg1 = nn::EncodeOne(perturbed, cfg, g);
    for (std::size_t c = 0; c < 4; ++c) {
      bool far_wins = false;
      for (const auto* fc : {&before.second, &after.second}) {
        double best = -1;
        for (int u = 0; u < n; ++u) best = std::max(best, (*fc)(u, c));
        for (int u = 0; u < n; ++u)
          if (reached.count(u) && (*fc)(u, c) == best) far_wins = true;
      }
      if (!far_wins) CHECK(hg0[c] == doctest::Approx(hg1[c]).epsilon(1e-12));
    }

    // Attention still sees the distant token.
    nn::EncoderConfig full{4, hops, 2, true, true, 0.0};
    g.sequence = {v, far};
    const auto r0 = nn::EncodeOne(params, full, g);
    const auto r1 = nn::EncodeOne(perturbed, full, g);
    double delta = 0.0;
    for (int c = 4; c < 8; ++c) delta += std::abs(r0[c] - r1[c]);
    CHECK(delta > 0.0);
  }
}

TEST_CASE("graph encoding is invariant to node relabeling") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    auto params = nn::EncoderParams::Init(10, 6, rng);
    const auto g = RandomGraph(rng, 8, 12, 10);
    std::vector<int> perm(8);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const nn::EncoderConfig cfg{6, 3, 3, true, true, 0.0};
    const auto a = nn::EncodeOne(params, cfg, g);
    const auto b = nn::EncodeOne(params, cfg, Permute(g, perm));
    for (std::size_t c = 0; c < a.size(); ++c)
      CHECK(a[c] == doctest::Approx(b[c]).epsilon(1e-12));
  }
}

TEST_CASE("multi-head attention examples") {
  std::mt19937_64 rng(6);
  auto params = nn::EncoderParams::Init(4, 4, rng);
  Tape tape;
  auto p = nn::Bind(tape, params);
  Var one = tape.Constant(RandomTensor(1, 4, rng));
  std::vector<Var> weights;
  Var out = nn::MultiHeadAttention(one, {0, 1}, 2, p, &weights);
  Var expected = ad::MatMul(ad::MatMul(one, p.attn_value), p.attn_output);
  for (std::size_t c = 0; c < 4; ++c)
    CHECK(out.value()(0, c) == doctest::Approx(expected.value()(0, c)).epsilon(1e-14));
  for (Var w : weights) CHECK(w.value()(0, 0) == 1.0);

  const Tensor row = RandomTensor(1, 4, rng);
  Tensor same({5, 4});
  for (std::size_t r = 0; r < 5; ++r)
    for (std::size_t c = 0; c < 4; ++c) same(r, c) = row(0, c);
  weights.clear();
  Var ctx = nn::MultiHeadAttention(tape.Constant(same), {0, 5}, 2, p, &weights);
  REQUIRE(weights.size() == 2);
  for (Var w : weights)
    for (double x : w.value().values()) CHECK(x == doctest::Approx(0.2).epsilon(1e-15));
  for (std::size_t r = 1; r < 5; ++r)
    for (std::size_t c = 0; c < 4; ++c) CHECK(ctx.value()(r, c) == ctx.value()(0, c));

  weights.clear();
  Var mixed = tape.Constant(RandomTensor(7, 4, rng, -4, 4));
  nn::MultiHeadAttention(mixed, {0, 3, 7}, 4, p, &weights);
  CHECK(weights.size() == 8);
  for (Var w : weights)
    for (std::size_t r = 0; r < w.rows(); ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < w.cols(); ++c) s += w.value()(r, c);
      CHECK(std::abs(s - 1.0) < 1e-9);
    }
  CHECK_THROWS(nn::MultiHeadAttention(mixed, {0, 7}, 3, p));
  CHECK_THROWS(nn::MultiHeadAttention(mixed, {0, 3, 3, 7}, 2, p));
}

TEST_CASE("sequence readout is a column mean") {
  Tape tape;
  Var rows = tape.Constant(Tensor::Matrix(3, 2, {1, 2, 1, 2, 1, 2}));
  Var r = nn::SequenceReadout(rows, {0, 3});
  CHECK(r.value()(0, 0) == 1.0);
  CHECK(r.value()(0, 1) == 2.0);
  Var single = nn::SequenceReadout(tape.Constant(Tensor::Matrix(1, 2, {4, -1})), {0, 1});
  CHECK(single.value()(0, 0) == 4.0);
  CHECK(single.value()(0, 1) == -1.0);
  std::mt19937_64 rng(2);
  const Tensor m = RandomTensor(4, 3, rng);
  Var base = nn::SequenceReadout(tape.Constant(m), {0, 4});
  Var scaled = nn::SequenceReadout(ad::Scale(tape.Constant(m), 3.0), {0, 4});
  for (std::size_t c = 0; c < 3; ++c)
    CHECK(scaled.value()(0, c) == doctest::Approx(3.0 * base.value()(0, c)));
}

TEST_CASE("joint encoding layout and component toggles") {
  std::mt19937_64 rng(12);
  const auto g = testing::SmallGraph();
  for (int d : {32, 64, 128, 256}) {
    auto params = nn::EncoderParams::Init(8, d, rng);
    const nn::EncoderConfig cfg{d, 2, 4, true, true, 0.3};
    const auto full = nn::EncodeOne(params, cfg, g);
    CHECK(full.size() == std::size_t(2 * d));
    for (double v : full) CHECK(std::isfinite(v));
    CHECK(nn::EncodeOne(params, cfg, g) == full);

    auto graph_only = cfg;
    graph_only.use_attention = false;
    const auto a = nn::EncodeOne(params, graph_only, g);
    auto seq_only = cfg;
    seq_only.use_biggnn = false;
    const auto b = nn::EncodeOne(params, seq_only, g);
    for (int c = 0; c < d; ++c) {
      CHECK(a[c] == full[c]);
      CHECK(a[d + c] == 0.0);
      CHECK(b[c] == 0.0);
      CHECK(b[d + c] == full[d + c]);
    }
  }
  nn::EncoderConfig bad{6, 2, 4, true, true, 0.0};
  CHECK_THROWS_AS(bad.Validate(), std::invalid_argument);
  bad = {8, 0, 2, true, true, 0.0};
  CHECK_THROWS_AS(bad.Validate(), std::invalid_argument);
  bad = {8, 1, 2, false, false, 0.0};
  CHECK_THROWS_AS(bad.Validate(), std::invalid_argument);
  const nn::GraphInput empty{};
  CHECK_THROWS(nn::GraphBatch::Make(std::span(&empty, 1)));
}

TEST_CASE("training mode dropout needs a generator and changes the output") {
  std::mt19937_64 rng(8);
  auto params = nn::EncoderParams::Init(8, 8, rng);
  const auto g = testing::SmallGraph();
  const auto batch = nn::GraphBatch::Make(std::span(&g, 1));
  const nn::EncoderConfig cfg{8, 2, 2, true, true, 0.5};
  Tape tape;
  auto p = nn::Bind(tape, params);
  CHECK_THROWS(nn::EncodeBatch(p, cfg, batch, nn::RunMode{true, nullptr}));
  std::mt19937_64 drop(1);
  Var train = nn::EncodeBatch(p, cfg, batch, nn::RunMode{true, &drop});
  const auto eval = nn::EncodeOne(params, cfg, g);
  bool differs = false;
  for (std::size_t c = 0; c < eval.size(); ++c)
    differs |= train.value().values()[c] != eval[c];
  CHECK(differs);
}
