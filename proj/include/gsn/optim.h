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

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gsn/tape.h"
#include "gsn/tensor.h"

namespace gsn::ad {

struct AdamOptions {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Bias-corrected Adam. Holds non-owning pointers to the parameters; each
// Step() consumes their gradients and zeroes them.
class Adam {
 public:
  Adam(std::vector<Tensor*> params, AdamOptions options = {});

  // Throws std::logic_error if a parameter has no fresh gradient and
  // NumericError if an update is non-finite (parameters are left untouched).
  void Step();

  double lr() const { return options_.lr; }
  void set_lr(double lr) { options_.lr = lr; }
  std::int64_t step_count() const { return step_; }
  const AdamOptions& options() const { return options_; }
  std::span<const Tensor> first_moments() const { return m_; }
  std::span<const Tensor> second_moments() const { return v_; }

 private:
  std::vector<Tensor*> params_;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
  AdamOptions options_;
  std::int64_t step_ = 0;
};

// Rescales all gradients so their global L2 norm is at most `max_norm`.
// Returns the factor applied (1 when no clipping happened).
double ClipGradNorm(std::span<Tensor* const> params, double max_norm);

double GlobalGradNorm(std::span<Tensor* const> params);

// Builds a scalar from `x` on the given tape.
using ScalarFn = std::function<Var(Tape& tape, Var x)>;

// Max over coordinates of |analytic - central difference| / max(1, |analytic|).
double FiniteDifferenceCheck(const ScalarFn& f, const Tensor& x,
                             double h = 1e-5);

}  // namespace gsn::ad
