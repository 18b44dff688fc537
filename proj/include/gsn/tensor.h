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
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gsn::ad {

using Shape = std::vector<std::size_t>;

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a forward value, gradient or update stops being finite.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string ShapeString(const Shape& shape);

// Dense row-major array of doubles with an optional gradient accumulator.
//
// Rank 0 and 1 tensors are viewed as a single row by the matrix accessors;
// higher ranks fold every leading axis into `rows()`.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> values);

  static Tensor Scalar(double value);
  static Tensor Matrix(std::size_t rows, std::size_t cols,
                       std::initializer_list<double> values);
  static Tensor Zeros(std::size_t rows, std::size_t cols);
  static Tensor Identity(std::size_t n);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t numel() const { return values_.size(); }
  std::size_t rows() const;
  std::size_t cols() const;

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double& operator()(std::size_t r, std::size_t c) {
    return values_[r * cols() + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return values_[r * cols() + c];
  }
  // Value of a one-element tensor.
  double item() const;

  bool requires_grad() const { return requires_grad_; }
  void set_requires_grad(bool on);

  // True once a backward pass has accumulated into this tensor and until the
  // next ZeroGrad().
  bool has_grad() const { return has_grad_; }
  std::span<double> grad();
  std::span<const double> grad() const;
  void AccumulateGrad(std::span<const double> delta);
  void ZeroGrad();

  bool AllFinite() const;

 private:
  Shape shape_;
  std::vector<double> values_;
  std::vector<double> grad_;
  bool requires_grad_ = false;
  bool has_grad_ = false;
};

}  // namespace gsn::ad
