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
#include <span>
#include <string_view>
#include <vector>

#include "gsn/tape.h"

// Differentiable primitives. Every result is a rank-2 tensor; rank-0/1 inputs
// act as a single row.
//
// Binary elementwise ops (Add, Sub, Mul) accept a right operand of the same
// shape, a 1 x n row, an m x 1 column or a 1 x 1 scalar, broadcast over the
// left operand.
namespace gsn::ad {

Var MatMul(Var a, Var b);
Var Add(Var a, Var b);
Var Sub(Var a, Var b);
Var Mul(Var a, Var b);
Var Scale(Var a, double factor);

Var Sigmoid(Var a);
Var Tanh(Var a);
Var Relu(Var a);
Var Exp(Var a);
Var Log(Var a);

Var RowSoftmax(Var a);
// Numerically stable log(RowSoftmax(a)).
Var RowLogSoftmax(Var a);

// axis 0 stacks rows, axis 1 stacks columns.
Var Concat(std::span<const Var> parts, int axis);
Var Slice(Var a, int axis, std::size_t begin, std::size_t end);
Var Transpose(Var a);

// out[i] = table[rows[i]]; also serves as the embedding lookup.
Var Gather(Var table, std::vector<int> rows);
// out has `out_rows` rows; out[rows[i]] += src[i].
Var IndexAdd(Var src, std::vector<int> rows, std::size_t out_rows);

// axis -1 reduces everything to 1 x 1; axis 0 gives 1 x cols; axis 1 gives
// rows x 1.
Var Sum(Var a, int axis);
Var Mean(Var a, int axis);
// Ties route the gradient to the first maximal entry.
Var Max(Var a, int axis);

// Column-wise reductions over row segments [offsets[g], offsets[g+1]).
Var SegmentMax(Var a, std::vector<std::size_t> offsets);
Var SegmentMean(Var a, std::vector<std::size_t> offsets);

// Inverted dropout in training mode, identity otherwise.
Var Dropout(Var a, double rate, std::mt19937_64& rng, bool training);

enum class OpKind {
  kMatMul,
  kAdd,
  kSub,
  kMul,
  kScale,
  kSigmoid,
  kTanh,
  kRelu,
  kExp,
  kLog,
  kRowSoftmax,
  kRowLogSoftmax,
  kConcat,
  kSlice,
  kGather,
  kIndexAdd,
  kSum,
  kMax,
  kMean,
  kSegmentMax,
  kSegmentMean,
  kTranspose,
  kDropout,
};

struct OpAttrs {
  int axis = 0;
  std::size_t begin = 0;
  std::size_t end = 0;
  double factor = 1.0;
  std::vector<int> indices;
  std::vector<std::size_t> offsets;
  std::size_t out_rows = 0;
  double rate = 0.0;
  std::mt19937_64* rng = nullptr;
  bool training = false;
};

// Throws std::invalid_argument for an unknown name.
OpKind ParseOpKind(std::string_view name);
std::string_view OpName(OpKind kind);

// Generic entry point used by tooling and tests; dispatches to the functions
// above after checking arity and attributes.
Var Apply(OpKind kind, std::span<const Var> inputs, const OpAttrs& attrs);

}  // namespace gsn::ad
