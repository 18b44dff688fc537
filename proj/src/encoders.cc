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

#include "gsn/encoders.h"

#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

namespace gsn::nn {
namespace {

Tensor Xavier(std::size_t in, std::size_t out, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Tensor t({in, out});
  for (double& v : t.values()) v = dist(rng);
  return t;
}

Var Zeros(Tape& tape, std::size_t rows, std::size_t cols) {
  return tape.Constant(Tensor::Zeros(rows, cols));
}

Var Linear(Var x, Var w, Var b) { return ad::Add(ad::MatMul(x, w), b); }

Var Cat(std::initializer_list<Var> parts, int axis) {
  std::vector<Var> v(parts);
  return ad::Concat(v, axis);
}

}  // namespace

void EncoderConfig::Validate() const {
  if (dim < 1) throw std::invalid_argument("dim must be positive");
  if (heads < 1 || dim % heads != 0)
    throw std::invalid_argument("heads (" + std::to_string(heads) +
                                ") must divide dim (" + std::to_string(dim) +
                                ")");
  if (hops < 1) throw std::invalid_argument("hops must be >= 1");
  if (!use_biggnn && !use_attention)
    throw std::invalid_argument(
        "an encoder needs BiGGNN or attention enabled");
  if (dropout < 0.0 || dropout >= 1.0)
    throw std::invalid_argument("dropout must be in [0, 1)");
}

EncoderParams EncoderParams::Init(std::size_t vocab_size, int dim,
                                  std::mt19937_64& rng) {
  const auto d = static_cast<std::size_t>(dim);
  EncoderParams p;
  p.embedding = Tensor({vocab_size, d});
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(double(d)));
  for (double& v : p.embedding.values()) v = normal(rng);
  p.fuse_w = Xavier(4 * d, d, rng);
  p.fuse_b = Tensor::Zeros(1, d);
  p.gru_update_w = Xavier(2 * d, d, rng);
  p.gru_update_b = Tensor::Zeros(1, d);
  p.gru_reset_w = Xavier(2 * d, d, rng);
  p.gru_reset_b = Tensor::Zeros(1, d);
  p.gru_cand_w = Xavier(2 * d, d, rng);
  p.gru_cand_b = Tensor::Zeros(1, d);
  p.attn_query = Xavier(d, d, rng);
  p.attn_key = Xavier(d, d, rng);
  p.attn_value = Xavier(d, d, rng);
  p.attn_output = Xavier(d, d, rng);
  p.readout_w = Xavier(d, d, rng);
  p.readout_b = Tensor::Zeros(1, d);
  return p;
}

std::vector<std::pair<std::string, Tensor*>> EncoderParams::Named() {
  return {{"embedding", &embedding},
          {"fuse.w", &fuse_w},
          {"fuse.b", &fuse_b},
          {"gru.update.w", &gru_update_w},
          {"gru.update.b", &gru_update_b},
          {"gru.reset.w", &gru_reset_w},
          {"gru.reset.b", &gru_reset_b},
          {"gru.candidate.w", &gru_cand_w},
          {"gru.candidate.b", &gru_cand_b},
          {"attention.query", &attn_query},
          {"attention.key", &attn_key},
          {"attention.value", &attn_value},
          {"attention.output", &attn_output},
          {"readout.w", &readout_w},
          {"readout.b", &readout_b}};
}

std::vector<std::pair<std::string, const Tensor*>> EncoderParams::Named()
    const {
  std::vector<std::pair<std::string, const Tensor*>> out;
  for (auto& [name, t] : const_cast<EncoderParams*>(this)->Named())
    out.emplace_back(name, t);
  return out;
}

std::vector<Tensor*> EncoderParams::Trainable(const EncoderConfig& config) {
  std::vector<Tensor*> out{&embedding};
  if (config.use_biggnn) {
    for (Tensor* t : {&fuse_w, &fuse_b, &gru_update_w, &gru_update_b,
                      &gru_reset_w, &gru_reset_b, &gru_cand_w, &gru_cand_b,
                      &readout_w, &readout_b})
      out.push_back(t);
  }
  if (config.use_attention) {
    for (Tensor* t : {&attn_query, &attn_key, &attn_value, &attn_output})
      out.push_back(t);
  }
  return out;
}

void EncoderParams::SetRequiresGrad(bool on) {
  for (auto& [name, t] : Named()) t->set_requires_grad(on);
}

BoundParams Bind(Tape& tape, EncoderParams& p) {
  BoundParams b;
  b.embedding = tape.Watch(p.embedding);
  b.fuse_w = tape.Watch(p.fuse_w);
  b.fuse_b = tape.Watch(p.fuse_b);
  b.gru_update_w = tape.Watch(p.gru_update_w);
  b.gru_update_b = tape.Watch(p.gru_update_b);
  b.gru_reset_w = tape.Watch(p.gru_reset_w);
  b.gru_reset_b = tape.Watch(p.gru_reset_b);
  b.gru_cand_w = tape.Watch(p.gru_cand_w);
  b.gru_cand_b = tape.Watch(p.gru_cand_b);
  b.attn_query = tape.Watch(p.attn_query);
  b.attn_key = tape.Watch(p.attn_key);
  b.attn_value = tape.Watch(p.attn_value);
  b.attn_output = tape.Watch(p.attn_output);
  b.readout_w = tape.Watch(p.readout_w);
  b.readout_b = tape.Watch(p.readout_b);
  return b;
}

GraphBatch GraphBatch::Make(std::span<const GraphInput* const> items) {
  GraphBatch b;
  b.node_offsets.push_back(0);
  b.sequence_offsets.push_back(0);
  for (const GraphInput* item : items) {
    if (item->node_tokens.empty())
      throw std::invalid_argument("cannot encode an empty graph");
    if (item->sequence.empty())
      throw std::invalid_argument("cannot encode an empty token sequence");
    const int base = static_cast<int>(b.node_tokens.size());
    const int n = static_cast<int>(item->node_tokens.size());
    b.node_tokens.insert(b.node_tokens.end(), item->node_tokens.begin(),
                         item->node_tokens.end());
    for (const auto& [s, d] : item->edges) {
      if (s < 0 || s >= n || d < 0 || d >= n)
        throw std::out_of_range("edge endpoint outside graph");
      b.edge_src.push_back(base + s);
      b.edge_dst.push_back(base + d);
    }
    for (int node : item->sequence) {
      if (node < 0 || node >= n)
        throw std::out_of_range("sequence node outside graph");
      b.sequence_tokens.push_back(item->node_tokens[node]);
    }
    b.node_offsets.push_back(b.node_tokens.size());
    b.sequence_offsets.push_back(b.sequence_tokens.size());
  }
  return b;
}

GraphBatch GraphBatch::Make(std::span<const GraphInput> items) {
  std::vector<const GraphInput*> ptrs;
  for (const GraphInput& g : items) ptrs.push_back(&g);
  return Make(std::span<const GraphInput* const>(ptrs));
}

Var InitNodeStates(const BoundParams& p, std::span<const int> node_tokens,
                   double dropout, const RunMode& mode) {
  Var h0 = ad::Gather(p.embedding,
                      std::vector<int>(node_tokens.begin(), node_tokens.end()));
  if (mode.training && dropout > 0.0) {
    if (mode.rng == nullptr)
      throw std::invalid_argument("training-mode dropout needs an rng");
    h0 = ad::Dropout(h0, dropout, *mode.rng, true);
  }
  return h0;
}

Var AggregateDirectional(Var states, std::span<const int> src,
                         std::span<const int> dst, Direction direction) {
  if (src.size() != dst.size())
    throw std::invalid_argument("edge source/destination length mismatch");
  if (src.empty()) return Zeros(states.tape(), states.rows(), states.cols());
  const auto from = direction == Direction::kIncoming ? src : dst;
  const auto to = direction == Direction::kIncoming ? dst : src;
  Var messages =
      ad::Gather(states, std::vector<int>(from.begin(), from.end()));
  return ad::IndexAdd(messages, std::vector<int>(to.begin(), to.end()),
                      states.rows());
}

Var FuseGated(Var a, Var b, Var weight, Var bias) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ad::ShapeError("fuse: operand shapes differ");
  if (weight.rows() != 4 * a.cols() || weight.cols() != a.cols())
    throw ad::ShapeError("fuse: weight must be 4d x d");
  Var diff = ad::Sub(a, b);
  Var features = Cat({a, b, ad::Mul(a, b), diff}, 1);
  Var z = ad::Sigmoid(Linear(features, weight, bias));
  return ad::Add(b, ad::Mul(z, diff));
}

Var GruCell(Var h, Var m, const BoundParams& p) {
  if (h.rows() != m.rows() || h.cols() != m.cols())
    throw ad::ShapeError("gru: state and input shapes differ");
  Var mh = Cat({m, h}, 1);
  Var z = ad::Sigmoid(Linear(mh, p.gru_update_w, p.gru_update_b));
  Var r = ad::Sigmoid(Linear(mh, p.gru_reset_w, p.gru_reset_b));
  Var candidate =
      ad::Tanh(Linear(Cat({m, ad::Mul(r, h)}, 1), p.gru_cand_w, p.gru_cand_b));
  return ad::Add(h, ad::Mul(z, ad::Sub(candidate, h)));
}

Var BiGgnnNodeStates(Var h0, std::span<const int> src, std::span<const int> dst,
                     int hops, const BoundParams& p, FusionMode fusion) {
  if (hops < 1) throw std::invalid_argument("hops must be >= 1");
  Var h = h0;
  for (int k = 0; k < hops; ++k) {
    Var incoming = AggregateDirectional(h, src, dst, Direction::kIncoming);
    Var message = incoming;
    if (fusion == FusionMode::kGated) {
      Var outgoing = AggregateDirectional(h, src, dst, Direction::kOutgoing);
      message = FuseGated(incoming, outgoing, p.fuse_w, p.fuse_b);
    }
    h = GruCell(h, message, p);
  }
  return h;
}

Var GraphReadout(Var states, const std::vector<std::size_t>& offsets,
                 const BoundParams& p) {
  return ad::SegmentMax(ad::Relu(Linear(states, p.readout_w, p.readout_b)),
                        offsets);
}

Var MultiHeadAttention(Var sequence, const std::vector<std::size_t>& offsets,
                       int heads, const BoundParams& p,
                       std::vector<Var>* weights) {
  const std::size_t d = sequence.cols();
  if (heads < 1 || d % heads != 0)
    throw std::invalid_argument("heads must divide the model dimension");
  if (offsets.size() < 2 || offsets.back() != sequence.rows())
    throw std::invalid_argument("attention: bad sequence offsets");
  const std::size_t dk = d / static_cast<std::size_t>(heads);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dk));
  Var q = ad::MatMul(sequence, p.attn_query);
  Var k = ad::MatMul(sequence, p.attn_key);
  Var v = ad::MatMul(sequence, p.attn_value);
  const bool single = offsets.size() == 2;
  std::vector<Var> segments;
  for (std::size_t s = 0; s + 1 < offsets.size(); ++s) {
    const std::size_t b = offsets[s], e = offsets[s + 1];
    if (e <= b) throw std::invalid_argument("attention: empty sequence");
    Var qs = single ? q : ad::Slice(q, 0, b, e);
    Var ks = single ? k : ad::Slice(k, 0, b, e);
    Var vs = single ? v : ad::Slice(v, 0, b, e);
    std::vector<Var> head_out;
    for (int h = 0; h < heads; ++h) {
      const std::size_t c0 = h * dk, c1 = c0 + dk;
      Var qh = heads == 1 ? qs : ad::Slice(qs, 1, c0, c1);
      Var kh = heads == 1 ? ks : ad::Slice(ks, 1, c0, c1);
      Var vh = heads == 1 ? vs : ad::Slice(vs, 1, c0, c1);
      Var scores = ad::Scale(ad::MatMul(qh, ad::Transpose(kh)), scale);
      Var attn = ad::RowSoftmax(scores);
      if (weights) weights->push_back(attn);
      head_out.push_back(ad::MatMul(attn, vh));
    }
    segments.push_back(heads == 1 ? head_out[0] : ad::Concat(head_out, 1));
  }
  Var joined = segments.size() == 1 ? segments[0] : ad::Concat(segments, 0);
  return ad::MatMul(joined, p.attn_output);
}

Var SequenceReadout(Var contextualized,
                    const std::vector<std::size_t>& offsets) {
  return ad::SegmentMean(contextualized, offsets);
}

Var EncodeBatch(const BoundParams& p, const EncoderConfig& config,
                const GraphBatch& batch, const RunMode& mode) {
  config.Validate();
  Tape& tape = p.embedding.tape();
  const std::size_t b = batch.size();
  const auto d = static_cast<std::size_t>(config.dim);
  if (p.embedding.cols() != d)
    throw ad::ShapeError("embedding width " +
                         std::to_string(p.embedding.cols()) +
                         " does not match dim " + std::to_string(d));
  Var graph_part = Zeros(tape, b, d);
  if (config.use_biggnn) {
    Var h0 = InitNodeStates(p, batch.node_tokens, config.dropout, mode);
    Var hk = BiGgnnNodeStates(h0, batch.edge_src, batch.edge_dst, config.hops,
                              p);
    graph_part = GraphReadout(hk, batch.node_offsets, p);
  }
  Var seq_part = Zeros(tape, b, d);
  if (config.use_attention) {
    Var x = InitNodeStates(p, batch.sequence_tokens, config.dropout, mode);
    Var ctx = MultiHeadAttention(x, batch.sequence_offsets, config.heads, p);
    seq_part = SequenceReadout(ctx, batch.sequence_offsets);
  }
  return Cat({graph_part, seq_part}, 1);
}

std::vector<double> EncodeOne(EncoderParams& params,
                              const EncoderConfig& config,
                              const GraphInput& input) {
  Tape tape;
  BoundParams p = Bind(tape, params);
  const GraphBatch batch = GraphBatch::Make(std::span(&input, 1));
  Var r = EncodeBatch(p, config, batch, RunMode{});
  auto v = r.value().values();
  return {v.begin(), v.end()};
}

Var GgnnHop(Var states, std::span<const int> src, std::span<const int> dst,
            Var message_w, const BoundParams& p) {
  if (message_w.rows() != states.cols() || message_w.cols() != states.cols())
    throw ad::ShapeError("ggnn: message weight must be d x d");
  Var projected = ad::MatMul(states, message_w);
  Var m = AggregateDirectional(projected, src, dst, Direction::kIncoming);
  return GruCell(states, m, p);
}

Var GcnLayer(Var states, std::span<const int> src, std::span<const int> dst,
             Var weight) {
  if (weight.rows() != states.cols())
    throw ad::ShapeError("gcn: weight rows must equal state width");
  const std::size_t n = states.rows();
  std::vector<std::set<int>> nbrs(n);
  for (std::size_t e = 0; e < src.size(); ++e) {
    if (src[e] == dst[e]) continue;
    nbrs[src[e]].insert(dst[e]);
    nbrs[dst[e]].insert(src[e]);
  }
  std::vector<int> from, to;
  std::vector<double> coef;
  for (std::size_t v = 0; v < n; ++v) {
    nbrs[v].insert(static_cast<int>(v));
  }
  for (std::size_t v = 0; v < n; ++v) {
    for (int u : nbrs[v]) {
      from.push_back(u);
      to.push_back(static_cast<int>(v));
      coef.push_back(1.0 / std::sqrt(static_cast<double>(nbrs[v].size()) *
                                     static_cast<double>(nbrs[u].size())));
    }
  }
  Var projected = ad::MatMul(states, weight);
  Var messages = ad::Gather(projected, from);
  Var scaled = ad::Mul(
      messages, states.tape().Constant(Tensor({coef.size(), 1}, coef)));
  return ad::Relu(ad::IndexAdd(scaled, to, n));
}

std::set<int> ReceptiveField(std::size_t node_count,
                             std::span<const std::pair<int, int>> edges,
                             int node, int hops) {
  if (node < 0 || static_cast<std::size_t>(node) >= node_count)
    throw std::out_of_range("unknown node " + std::to_string(node));
  std::vector<std::vector<int>> adj(node_count);
  for (const auto& [s, d] : edges) {
    adj[s].push_back(d);
    adj[d].push_back(s);
  }
  std::vector<int> dist(node_count, -1);
  std::deque<int> queue{node};
  dist[node] = 0;
  std::set<int> out{node};
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    if (dist[v] == hops) continue;
    for (int u : adj[v]) {
      if (dist[u] >= 0) continue;
      dist[u] = dist[v] + 1;
      out.insert(u);
      queue.push_back(u);
    }
  }
  return out;
}

}  // namespace gsn::nn
