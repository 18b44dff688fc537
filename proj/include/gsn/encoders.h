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
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gsn/code_graph.h"
#include "gsn/ops.h"
#include "gsn/summary_graph.h"
#include "gsn/tape.h"
#include "gsn/tensor.h"

namespace gsn::nn {

using ad::Tape;
using ad::Tensor;
using ad::Var;

struct EncoderConfig {
  int dim = 128;
  int hops = 4;
  int heads = 2;
  bool use_biggnn = true;
  bool use_attention = true;
  double dropout = 0.3;

  int head_dim() const { return dim / heads; }
  // Throws std::invalid_argument unless heads divides dim, hops >= 1 and at
  // least one component is enabled.
  void Validate() const;
};

// Learnable parameters of one encoder (program or summary side). Row-vector
// convention: a layer computes x * W + b with W of shape in x out.
struct EncoderParams {
  Tensor embedding;  // vocab x d
  Tensor fuse_w;     // 4d x d
  Tensor fuse_b;     // 1 x d
  Tensor gru_update_w, gru_update_b;  // 2d x d, 1 x d
  Tensor gru_reset_w, gru_reset_b;
  Tensor gru_cand_w, gru_cand_b;
  // Per-head projections stored side by side: head i owns columns
  // [i*d_k, (i+1)*d_k).
  Tensor attn_query, attn_key, attn_value;  // d x d
  Tensor attn_output;                       // h*d_v x d
  Tensor readout_w, readout_b;              // d x d, 1 x d

  static EncoderParams Init(std::size_t vocab_size, int dim,
                            std::mt19937_64& rng);

  // Stable name -> tensor listing used by checkpoints and the optimizer.
  std::vector<std::pair<std::string, Tensor*>> Named();
  std::vector<std::pair<std::string, const Tensor*>> Named() const;
  // Parameters that receive gradients under `config`'s component toggles.
  std::vector<Tensor*> Trainable(const EncoderConfig& config);
  void SetRequiresGrad(bool on);
};

// Parameters watched on a tape.
struct BoundParams {
  Var embedding, fuse_w, fuse_b;
  Var gru_update_w, gru_update_b, gru_reset_w, gru_reset_b, gru_cand_w,
      gru_cand_b;
  Var attn_query, attn_key, attn_value, attn_output;
  Var readout_w, readout_b;
};

BoundParams Bind(Tape& tape, EncoderParams& params);

// Encoder-ready view of one graph: vocabulary ids per node, directed edges
// and the node ids fed to attention (in order).
struct GraphInput {
  std::vector<int> node_tokens;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> sequence;
};

// Several graphs laid out as one disjoint union.
struct GraphBatch {
  std::vector<int> node_tokens;
  std::vector<int> edge_src;
  std::vector<int> edge_dst;
  std::vector<std::size_t> node_offsets;
  std::vector<int> sequence_tokens;
  std::vector<std::size_t> sequence_offsets;

  static GraphBatch Make(std::span<const GraphInput* const> items);
  static GraphBatch Make(std::span<const GraphInput> items);
  std::size_t size() const { return node_offsets.size() - 1; }
  std::size_t node_count() const { return node_tokens.size(); }
};

enum class Direction {
  kIncoming,  // sum over u with an edge u -> v
  kOutgoing,  // sum over u with an edge v -> u
};

enum class FusionMode {
  kGated,
  kIncomingOnly,  // fusion replaced by the incoming aggregate
};

struct RunMode {
  bool training = false;
  std::mt19937_64* rng = nullptr;  // required when training with dropout
};

// h^0: embedding rows for each node label (dropout applied in training).
Var InitNodeStates(const BoundParams& p, std::span<const int> node_tokens,
                   double dropout, const RunMode& mode);

Var AggregateDirectional(Var states, std::span<const int> src,
                         std::span<const int> dst, Direction direction);

// z = sigmoid([a; b; a*b; a-b] W_z + b_z);  z*a + (1-z)*b, row-wise.
Var FuseGated(Var a, Var b, Var weight, Var bias);

// Standard GRU cell with input m and state h:
//   z = sigmoid([m;h] W_z + b_z), r = sigmoid([m;h] W_r + b_r),
//   c = tanh([m; r*h] W_h + b_h), h' = (1-z)*h + z*c.
Var GruCell(Var h, Var m, const BoundParams& p);

// Node states after `hops` bidirectional rounds.
Var BiGgnnNodeStates(Var h0, std::span<const int> src, std::span<const int> dst,
                     int hops, const BoundParams& p,
                     FusionMode fusion = FusionMode::kGated);

// maxpool(ReLU(H W + b)) per graph segment.
Var GraphReadout(Var states, const std::vector<std::size_t>& offsets,
                 const BoundParams& p);

// Self-attention over each sequence segment. When `weights` is non-null it
// receives one (l x l) attention matrix per segment and head, segment-major.
Var MultiHeadAttention(Var sequence, const std::vector<std::size_t>& offsets,
                       int heads, const BoundParams& p,
                       std::vector<Var>* weights = nullptr);

// Column-wise mean per segment.
Var SequenceReadout(Var contextualized,
                    const std::vector<std::size_t>& offsets);

// B x 2d joint encodings [h^g ; h^c]; a disabled component contributes zeros.
Var EncodeBatch(const BoundParams& p, const EncoderConfig& config,
                const GraphBatch& batch, const RunMode& mode);

// Eval-mode encoding of a single graph, as plain numbers.
std::vector<double> EncodeOne(EncoderParams& params,
                              const EncoderConfig& config,
                              const GraphInput& input);

// GGNN hop: h' = GRU(h, sum_{u -> v} h_u W).
Var GgnnHop(Var states, std::span<const int> src, std::span<const int> dst,
            Var message_w, const BoundParams& p);

// GCN layer: h'_v = ReLU(sum_{u in N(v) + v} h_u W / sqrt(|N_v| |N_u|)),
// neighbourhoods undirected and including the self loop.
Var GcnLayer(Var states, std::span<const int> src, std::span<const int> dst,
             Var weight);

// Nodes within undirected distance <= hops of `node`.
std::set<int> ReceptiveField(std::size_t node_count,
                             std::span<const std::pair<int, int>> edges,
                             int node, int hops);

}  // namespace gsn::nn
