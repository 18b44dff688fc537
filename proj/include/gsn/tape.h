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
#include <deque>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "gsn/tensor.h"

namespace gsn::ad {

class Tape;

// Handle to a value recorded on a tape. Cheap to copy; valid while the tape
// lives.
class Var {
 public:
  Var() = default;

  const Tensor& value() const;
  Tape& tape() const { return *tape_; }
  int id() const { return id_; }
  bool requires_grad() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, int id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  int id_ = -1;
};

// What a backward rule sees for each input: its forward value and, when the
// input needs a gradient, the accumulator to add into (nullptr otherwise).
struct InputGrad {
  const Tensor* value;
  double* grad;
};

using BackwardFn = std::function<void(const Tensor& out,
                                      std::span<const double> out_grad,
                                      std::span<const InputGrad> inputs)>;

// Ordered record of executed primitives. Inputs always precede their
// consumers, so one reverse sweep computes all gradients.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Leaf bound to a parameter. Its gradient is added to `param` by
  // Backward(). Watching the same tensor twice returns the same Var.
  Var Watch(Tensor& param);
  Var Constant(Tensor value);

  // Appends a primitive result. The backward rule is kept only when some
  // input requires a gradient. Throws NumericError on non-finite values.
  Var Record(Tensor value, std::span<const Var> inputs, BackwardFn backward,
             const char* op_name);

  // Reverse sweep from a one-element root. A tape can be swept once.
  void Backward(Var root);

  std::size_t size() const { return nodes_.size(); }
  bool consumed() const { return consumed_; }

  const Tensor& value(int id) const { return nodes_[id].value; }
  bool requires_grad(int id) const { return nodes_[id].requires_grad; }

 private:
  struct Node {
    Tensor value;
    std::vector<int> inputs;
    BackwardFn backward;
    Tensor* param = nullptr;
    bool requires_grad = false;
  };

  Var Push(Node node);

  std::deque<Node> nodes_;
  std::unordered_map<const Tensor*, int> watched_;
  bool consumed_ = false;
};

}  // namespace gsn::ad
