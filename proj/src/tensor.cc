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

#include "gsn/tensor.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace gsn::ad {
namespace {

std::size_t Product(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

void CheckExtents(const Shape& shape) {
  for (std::size_t e : shape)
    if (e == 0) throw ShapeError("zero extent in shape " + ShapeString(shape));
}

}  // namespace

std::string ShapeString(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Tensor::Tensor(Shape shape, double fill)
    : shape_(std::move(shape)), values_(Product(shape_), fill) {
  CheckExtents(shape_);
}

Tensor::Tensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  CheckExtents(shape_);
  if (values_.size() != Product(shape_))
    throw ShapeError("shape " + ShapeString(shape_) + " needs " +
                     std::to_string(Product(shape_)) + " values, got " +
                     std::to_string(values_.size()));
}

Tensor Tensor::Scalar(double value) { return Tensor({1, 1}, {value}); }

Tensor Tensor::Matrix(std::size_t rows, std::size_t cols,
                      std::initializer_list<double> values) {
  return Tensor({rows, cols}, std::vector<double>(values));
}

Tensor Tensor::Zeros(std::size_t rows, std::size_t cols) {
  return Tensor({rows, cols}, 0.0);
}

Tensor Tensor::Identity(std::size_t n) {
  Tensor t({n, n}, 0.0);
  for (std::size_t i = 0; i < n; ++i) t(i, i) = 1.0;
  return t;
}

std::size_t Tensor::rows() const {
  if (shape_.size() <= 1) return 1;
  return values_.size() / shape_.back();
}

std::size_t Tensor::cols() const {
  if (shape_.empty()) return 1;
  return shape_.back();
}

double Tensor::item() const {
  if (values_.size() != 1)
    throw ShapeError("item() on tensor of shape " + ShapeString(shape_));
  return values_[0];
}

void Tensor::set_requires_grad(bool on) {
  requires_grad_ = on;
  if (on && grad_.size() != values_.size()) grad_.assign(values_.size(), 0.0);
}

std::span<double> Tensor::grad() {
  if (grad_.size() != values_.size()) grad_.assign(values_.size(), 0.0);
  return grad_;
}

std::span<const double> Tensor::grad() const {
  if (grad_.size() != values_.size())
    throw std::logic_error("tensor has no gradient storage");
  return grad_;
}

void Tensor::AccumulateGrad(std::span<const double> delta) {
  if (delta.size() != values_.size())
    throw ShapeError("gradient size mismatch for " + ShapeString(shape_));
  auto g = grad();
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += delta[i];
  has_grad_ = true;
}

void Tensor::ZeroGrad() {
  std::fill(grad_.begin(), grad_.end(), 0.0);
  has_grad_ = false;
}

bool Tensor::AllFinite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace gsn::ad
