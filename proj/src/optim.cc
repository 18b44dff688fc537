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

#include "gsn/optim.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace gsn::ad {

Adam::Adam(std::vector<Tensor*> params, AdamOptions options)
    : params_(std::move(params)), options_(options) {
  if (options_.lr < 0.0 || options_.eps <= 0.0 || options_.beta1 < 0.0 ||
      options_.beta1 >= 1.0 || options_.beta2 < 0.0 || options_.beta2 >= 1.0)
    throw std::invalid_argument("adam: invalid hyperparameters");
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (Tensor* p : params_) {
    m_.emplace_back(p->shape(), 0.0);
    v_.emplace_back(p->shape(), 0.0);
  }
}

void Adam::Step() {
  for (std::size_t i = 0; i < params_.size(); ++i)
    if (!params_[i]->has_grad())
      throw std::logic_error("adam: parameter " + std::to_string(i) +
                             " has no gradient (run backward first)");

  const std::int64_t t = step_ + 1;
  const double b1 = options_.beta1, b2 = options_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t));

  // Compute every update before touching anything so a non-finite step
  // leaves the model intact.
  std::vector<std::vector<double>> m_next(params_.size());
  std::vector<std::vector<double>> v_next(params_.size());
  std::vector<std::vector<double>> p_next(params_.size());
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto g = std::as_const(*params_[i]).grad();
    auto p = std::as_const(*params_[i]).values();
    auto m = m_[i].values();
    auto v = v_[i].values();
    m_next[i].resize(g.size());
    v_next[i].resize(g.size());
    p_next[i].resize(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double mk = b1 * m[k] + (1.0 - b1) * g[k];
      const double vk = b2 * v[k] + (1.0 - b2) * g[k] * g[k];
      const double update =
          options_.lr * (mk / c1) / (std::sqrt(vk / c2) + options_.eps);
      const double pk = p[k] - update;
      if (!std::isfinite(pk))
        throw NumericError("adam: non-finite update for parameter " +
                           std::to_string(i));
      m_next[i][k] = mk;
      v_next[i][k] = vk;
      p_next[i][k] = pk;
    }
  }
  for (std::size_t i = 0; i < params_.size(); ++i) {
    std::copy(m_next[i].begin(), m_next[i].end(), m_[i].values().begin());
    std::copy(v_next[i].begin(), v_next[i].end(), v_[i].values().begin());
    std::copy(p_next[i].begin(), p_next[i].end(),
              params_[i]->values().begin());
    params_[i]->ZeroGrad();
  }
  step_ = t;
}

double GlobalGradNorm(std::span<Tensor* const> params) {
  double s = 0.0;
  for (const Tensor* p : params) {
    if (!p->has_grad()) continue;
    for (double g : p->grad()) s += g * g;
  }
  return std::sqrt(s);
}

double ClipGradNorm(std::span<Tensor* const> params, double max_norm) {
  if (max_norm <= 0.0)
    throw std::invalid_argument("clip: max_norm must be positive");
  const double norm = GlobalGradNorm(params);
  if (!std::isfinite(norm)) throw NumericError("clip: non-finite grad norm");
  if (norm <= max_norm) return 1.0;
  const double scale = max_norm / norm;
  for (Tensor* p : params) {
    if (!p->has_grad()) continue;
    for (double& g : p->grad()) g *= scale;
  }
  return scale;
}

double FiniteDifferenceCheck(const ScalarFn& f, const Tensor& x, double h) {
  if (h <= 0.0) throw std::invalid_argument("gradcheck: step must be > 0");

  Tensor probe = x;
  probe.set_requires_grad(true);
  probe.ZeroGrad();
  {
    Tape tape;
    Var root = f(tape, tape.Watch(probe));
    if (root.value().numel() != 1)
      throw ShapeError("gradcheck: function is not scalar-valued");
    tape.Backward(root);
  }
  std::vector<double> analytic(probe.numel(), 0.0);
  if (probe.has_grad()) {
    auto g = std::as_const(probe).grad();
    analytic.assign(g.begin(), g.end());
  }

  auto eval = [&](const Tensor& point) {
    Tensor input = point;
    input.set_requires_grad(false);
    Tape tape;
    const double y = f(tape, tape.Watch(input)).value().item();
    if (!std::isfinite(y)) throw NumericError("gradcheck: non-finite value");
    return y;
  };

  double worst = 0.0;
  Tensor point = x;
  for (std::size_t k = 0; k < x.numel(); ++k) {
    const double orig = point.values()[k];
    point.values()[k] = orig + h;
    const double up = eval(point);
    point.values()[k] = orig - h;
    const double down = eval(point);
    point.values()[k] = orig;
    const double numeric = (up - down) / (2.0 * h);
    const double err =
        std::abs(analytic[k] - numeric) / std::max(1.0, std::abs(analytic[k]));
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace gsn::ad
