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

#include "gsn/tape.h"

#include <cmath>
#include <string>

namespace gsn::ad {

const Tensor& Var::value() const { return tape_->value(id_); }

bool Var::requires_grad() const { return tape_->requires_grad(id_); }

Var Tape::Push(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::Watch(Tensor& param) {
  if (auto it = watched_.find(&param); it != watched_.end())
    return Var(this, it->second);
  Node node;
  node.value = param;
  node.value.set_requires_grad(false);
  node.param = &param;
  node.requires_grad = param.requires_grad();
  Var v = Push(std::move(node));
  watched_.emplace(&param, v.id());
  return v;
}

Var Tape::Constant(Tensor value) {
  Node node;
  node.value = std::move(value);
  return Push(std::move(node));
}

Var Tape::Record(Tensor value, std::span<const Var> inputs,
                 BackwardFn backward, const char* op_name) {
  if (consumed_) throw std::logic_error("tape already consumed");
  if (!value.AllFinite())
    throw NumericError(std::string("non-finite output from ") + op_name +
                       " with shape " + ShapeString(value.shape()));
  Node node;
  node.value = std::move(value);
  node.inputs.reserve(inputs.size());
  for (const Var& in : inputs) {
    if (&in.tape() != this)
      throw std::logic_error(std::string(op_name) + ": input from another tape");
    node.inputs.push_back(in.id());
    node.requires_grad = node.requires_grad || in.requires_grad();
  }
  if (node.requires_grad) node.backward = std::move(backward);
  return Push(std::move(node));
}

void Tape::Backward(Var root) {
  if (consumed_) throw std::logic_error("tape already consumed");
  if (&root.tape() != this)
    throw std::logic_error("backward root belongs to another tape");
  if (root.value().numel() != 1)
    throw ShapeError("backward root must be scalar, got " +
                     ShapeString(root.value().shape()));
  consumed_ = true;
  if (!nodes_[root.id()].requires_grad) return;

  std::vector<std::vector<double>> grads(root.id() + 1);
  for (int i = 0; i <= root.id(); ++i)
    if (nodes_[i].requires_grad) grads[i].assign(nodes_[i].value.numel(), 0.0);
  grads[root.id()][0] = 1.0;

  std::vector<InputGrad> slots;
  for (int i = root.id(); i >= 0; --i) {
    Node& node = nodes_[i];
    if (!node.requires_grad || !node.backward) continue;
    slots.clear();
    for (int in : node.inputs) {
      slots.push_back({&nodes_[in].value,
                       nodes_[in].requires_grad ? grads[in].data() : nullptr});
    }
    node.backward(node.value, grads[i], slots);
  }

  for (int i = 0; i <= root.id(); ++i) {
    Node& node = nodes_[i];
    if (node.param == nullptr || !node.requires_grad) continue;
    for (double g : grads[i])
      if (!std::isfinite(g))
        throw NumericError("non-finite gradient for parameter of shape " +
                           ShapeString(node.value.shape()));
    node.param->AccumulateGrad(grads[i]);
  }
}

}  // namespace gsn::ad
