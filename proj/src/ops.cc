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

#include "gsn/ops.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "gsn/kernels.h"

namespace gsn::ad {
namespace {

Tensor Mat(std::size_t rows, std::size_t cols) {
  return Tensor({rows, cols}, 0.0);
}

Var Rec(const char* name, Tensor out, std::initializer_list<Var> inputs,
        BackwardFn backward) {
  std::vector<Var> ins(inputs);
  return ins.front().tape().Record(std::move(out), ins, std::move(backward),
                                   name);
}

std::string Dims(const Tensor& t) {
  return std::to_string(t.rows()) + "x" + std::to_string(t.cols());
}

enum class Bcast { kSame, kRow, kCol, kScalar };

Bcast Broadcast(const char* op, const Tensor& a, const Tensor& b) {
  if (a.rows() == b.rows() && a.cols() == b.cols()) return Bcast::kSame;
  if (b.rows() == 1 && b.cols() == 1) return Bcast::kScalar;
  if (b.rows() == 1 && b.cols() == a.cols()) return Bcast::kRow;
  if (b.cols() == 1 && b.rows() == a.rows()) return Bcast::kCol;
  throw ShapeError(std::string(op) + ": cannot broadcast " + Dims(b) +
                   " onto " + Dims(a));
}

std::size_t BIndex(Bcast mode, std::size_t i, std::size_t j,
                   std::size_t cols) {
  switch (mode) {
    case Bcast::kSame:
      return i * cols + j;
    case Bcast::kRow:
      return j;
    case Bcast::kCol:
      return i;
    case Bcast::kScalar:
      return 0;
  }
  return 0;
}

// Shared driver for Add/Sub/Mul. `op` maps (x, y) to the output;
// `da`/`db` give the local partials at (x, y).
template <typename Op, typename DA, typename DB>
Var Elementwise(const char* name, Var a, Var b, Op op, DA da, DB db) {
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  const Bcast mode = Broadcast(name, av, bv);
  const std::size_t r = av.rows(), c = av.cols();
  Tensor out = Mat(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      out(i, j) = op(av(i, j), bv.values()[BIndex(mode, i, j, c)]);
  return Rec(name, std::move(out), {a, b},
             [mode, r, c, da, db](const Tensor&, std::span<const double> g,
                                  std::span<const InputGrad> in) {
               const Tensor& x = *in[0].value;
               const auto y = in[1].value->values();
               for (std::size_t i = 0; i < r; ++i) {
                 for (std::size_t j = 0; j < c; ++j) {
                   const std::size_t k = i * c + j;
                   const std::size_t kb = BIndex(mode, i, j, c);
                   if (in[0].grad) in[0].grad[k] += g[k] * da(x(i, j), y[kb]);
                   if (in[1].grad) in[1].grad[kb] += g[k] * db(x(i, j), y[kb]);
                 }
               }
             });
}

template <typename F, typename D>
Var Unary(const char* name, Var a, F f, D dfdx_from_xy) {
  const Tensor& av = a.value();
  Tensor out = Mat(av.rows(), av.cols());
  auto src = av.values();
  auto dst = out.values();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = f(src[k]);
  return Rec(name, std::move(out), {a},
             [dfdx_from_xy](const Tensor& y, std::span<const double> g,
                            std::span<const InputGrad> in) {
               auto x = in[0].value->values();
               auto yv = y.values();
               for (std::size_t k = 0; k < g.size(); ++k)
                 in[0].grad[k] += g[k] * dfdx_from_xy(x[k], yv[k]);
             });
}

void CheckAxis(const char* op, int axis, bool allow_all) {
  if (axis == 0 || axis == 1 || (allow_all && axis == -1)) return;
  throw std::invalid_argument(std::string(op) + ": invalid axis " +
                              std::to_string(axis));
}

void CheckOffsets(const char* op, const std::vector<std::size_t>& offsets,
                  std::size_t rows) {
  if (offsets.size() < 2 || offsets.front() != 0 || offsets.back() != rows)
    throw std::invalid_argument(std::string(op) +
                                ": offsets must run from 0 to row count");
  for (std::size_t g = 0; g + 1 < offsets.size(); ++g)
    if (offsets[g + 1] <= offsets[g])
      throw std::invalid_argument(std::string(op) + ": empty segment " +
                                  std::to_string(g));
}

}  // namespace

Var MatMul(Var a, Var b) {
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.cols() != bv.rows())
    throw ShapeError("matmul: " + Dims(av) + " times " + Dims(bv));
  Tensor out = Mat(av.rows(), bv.cols());
  kernels::Gemm({av.values().data(), av.rows(), av.cols()},
                {bv.values().data(), bv.rows(), bv.cols()},
                {out.values().data(), out.rows(), out.cols()}, false);
  return Rec("matmul", std::move(out), {a, b},
             [](const Tensor& y, std::span<const double> g,
                std::span<const InputGrad> in) {
               const Tensor& x = *in[0].value;
               const Tensor& w = *in[1].value;
               const kernels::ConstMatrixView gv{g.data(), y.rows(), y.cols()};
               if (in[0].grad)
                 kernels::GemmNT(gv, {w.values().data(), w.rows(), w.cols()},
                                 {in[0].grad, x.rows(), x.cols()}, true);
               if (in[1].grad)
                 kernels::GemmTN({x.values().data(), x.rows(), x.cols()}, gv,
                                 {in[1].grad, w.rows(), w.cols()}, true);
             });
}

Var Add(Var a, Var b) {
  return Elementwise(
      "add", a, b, [](double x, double y) { return x + y; },
      [](double, double) { return 1.0; }, [](double, double) { return 1.0; });
}

Var Sub(Var a, Var b) {
  return Elementwise(
      "sub", a, b, [](double x, double y) { return x - y; },
      [](double, double) { return 1.0; }, [](double, double) { return -1.0; });
}

Var Mul(Var a, Var b) {
  return Elementwise(
      "mul", a, b, [](double x, double y) { return x * y; },
      [](double, double y) { return y; }, [](double x, double) { return x; });
}

Var Scale(Var a, double factor) {
  return Unary(
      "scale", a, [factor](double x) { return factor * x; },
      [factor](double, double) { return factor; });
}

Var Sigmoid(Var a) {
  return Unary(
      "sigmoid", a,
      [](double x) {
        if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Var Tanh(Var a) {
  return Unary(
      "tanh", a, [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

Var Relu(Var a) {
  return Unary(
      "relu", a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Var Exp(Var a) {
  return Unary(
      "exp", a, [](double x) { return std::exp(x); },
      [](double, double y) { return y; });
}

Var Log(Var a) {
  return Unary(
      "log", a, [](double x) { return std::log(x); },
      [](double x, double) { return 1.0 / x; });
}

Var RowSoftmax(Var a) {
  const Tensor& av = a.value();
  const std::size_t r = av.rows(), c = av.cols();
  Tensor out = Mat(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < c; ++j) m = std::max(m, av(i, j));
    double s = 0.0;
    for (std::size_t j = 0; j < c; ++j) s += out(i, j) = std::exp(av(i, j) - m);
    for (std::size_t j = 0; j < c; ++j) out(i, j) /= s;
  }
  return Rec("row_softmax", std::move(out), {a},
             [r, c](const Tensor& y, std::span<const double> g,
                    std::span<const InputGrad> in) {
               for (std::size_t i = 0; i < r; ++i) {
                 double dot = 0.0;
                 for (std::size_t j = 0; j < c; ++j)
                   dot += g[i * c + j] * y(i, j);
                 for (std::size_t j = 0; j < c; ++j)
                   in[0].grad[i * c + j] += y(i, j) * (g[i * c + j] - dot);
               }
             });
}

Var RowLogSoftmax(Var a) {
  const Tensor& av = a.value();
  const std::size_t r = av.rows(), c = av.cols();
  Tensor out = Mat(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < c; ++j) m = std::max(m, av(i, j));
    double s = 0.0;
    for (std::size_t j = 0; j < c; ++j) s += std::exp(av(i, j) - m);
    const double lse = m + std::log(s);
    for (std::size_t j = 0; j < c; ++j) out(i, j) = av(i, j) - lse;
  }
  return Rec("row_log_softmax", std::move(out), {a},
             [r, c](const Tensor& y, std::span<const double> g,
                    std::span<const InputGrad> in) {
               for (std::size_t i = 0; i < r; ++i) {
                 double gs = 0.0;
                 for (std::size_t j = 0; j < c; ++j) gs += g[i * c + j];
                 for (std::size_t j = 0; j < c; ++j)
                   in[0].grad[i * c + j] +=
                       g[i * c + j] - std::exp(y(i, j)) * gs;
               }
             });
}

Var Concat(std::span<const Var> parts, int axis) {
  CheckAxis("concat", axis, false);
  if (parts.empty()) throw std::invalid_argument("concat: no inputs");
  std::size_t rows = 0, cols = 0;
  if (axis == 0) {
    cols = parts[0].cols();
    for (const Var& p : parts) {
      if (p.cols() != cols)
        throw ShapeError("concat(axis=0): column mismatch " +
                         Dims(p.value()) + " vs " + std::to_string(cols));
      rows += p.rows();
    }
  } else {
    rows = parts[0].rows();
    for (const Var& p : parts) {
      if (p.rows() != rows)
        throw ShapeError("concat(axis=1): row mismatch " + Dims(p.value()) +
                         " vs " + std::to_string(rows));
      cols += p.cols();
    }
  }
  Tensor out = Mat(rows, cols);
  std::size_t offset = 0;
  for (const Var& p : parts) {
    const Tensor& pv = p.value();
    for (std::size_t i = 0; i < pv.rows(); ++i)
      for (std::size_t j = 0; j < pv.cols(); ++j) {
        if (axis == 0)
          out(offset + i, j) = pv(i, j);
        else
          out(i, offset + j) = pv(i, j);
      }
    offset += axis == 0 ? pv.rows() : pv.cols();
  }
  std::vector<Var> ins(parts.begin(), parts.end());
  return parts[0].tape().Record(
      std::move(out), ins,
      [axis, cols](const Tensor&, std::span<const double> g,
                   std::span<const InputGrad> in) {
        std::size_t offset = 0;
        for (const InputGrad& p : in) {
          const std::size_t pr = p.value->rows(), pc = p.value->cols();
          if (p.grad) {
            for (std::size_t i = 0; i < pr; ++i)
              for (std::size_t j = 0; j < pc; ++j) {
                const std::size_t k =
                    axis == 0 ? (offset + i) * cols + j : i * cols + offset + j;
                p.grad[i * pc + j] += g[k];
              }
          }
          offset += axis == 0 ? pr : pc;
        }
      },
      "concat");
}

Var Slice(Var a, int axis, std::size_t begin, std::size_t end) {
  CheckAxis("slice", axis, false);
  const Tensor& av = a.value();
  const std::size_t extent = axis == 0 ? av.rows() : av.cols();
  if (begin >= end || end > extent)
    throw ShapeError("slice: range [" + std::to_string(begin) + "," +
                     std::to_string(end) + ") outside extent " +
                     std::to_string(extent));
  const std::size_t r = axis == 0 ? end - begin : av.rows();
  const std::size_t c = axis == 1 ? end - begin : av.cols();
  const std::size_t src_cols = av.cols();
  Tensor out = Mat(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      out(i, j) = axis == 0 ? av(begin + i, j) : av(i, begin + j);
  return Rec("slice", std::move(out), {a},
             [axis, begin, r, c, src_cols](const Tensor&,
                                           std::span<const double> g,
                                           std::span<const InputGrad> in) {
               for (std::size_t i = 0; i < r; ++i)
                 for (std::size_t j = 0; j < c; ++j) {
                   const std::size_t k = axis == 0
                                             ? (begin + i) * src_cols + j
                                             : i * src_cols + begin + j;
                   in[0].grad[k] += g[i * c + j];
                 }
             });
}

Var Transpose(Var a) {
  const Tensor& av = a.value();
  const std::size_t r = av.rows(), c = av.cols();
  Tensor out = Mat(c, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out(j, i) = av(i, j);
  return Rec("transpose", std::move(out), {a},
             [r, c](const Tensor&, std::span<const double> g,
                    std::span<const InputGrad> in) {
               for (std::size_t i = 0; i < r; ++i)
                 for (std::size_t j = 0; j < c; ++j)
                   in[0].grad[i * c + j] += g[j * r + i];
             });
}

Var Gather(Var table, std::vector<int> rows) {
  const Tensor& tv = table.value();
  if (rows.empty()) throw std::invalid_argument("gather: no indices");
  for (int r : rows)
    if (r < 0 || static_cast<std::size_t>(r) >= tv.rows())
      throw std::out_of_range("gather: index " + std::to_string(r) +
                              " outside " + std::to_string(tv.rows()) +
                              " rows");
  const std::size_t c = tv.cols();
  Tensor out = Mat(rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::copy_n(tv.values().data() + rows[i] * c, c,
                out.values().data() + i * c);
  return Rec("gather", std::move(out), {table},
             [rows = std::move(rows), c](const Tensor&,
                                         std::span<const double> g,
                                         std::span<const InputGrad> in) {
               for (std::size_t i = 0; i < rows.size(); ++i) {
                 double* dst = in[0].grad + rows[i] * c;
                 const double* src = g.data() + i * c;
                 for (std::size_t j = 0; j < c; ++j) dst[j] += src[j];
               }
             });
}

Var IndexAdd(Var src, std::vector<int> rows, std::size_t out_rows) {
  const Tensor& sv = src.value();
  if (rows.size() != sv.rows())
    throw ShapeError("index_add: " + std::to_string(rows.size()) +
                     " indices for " + std::to_string(sv.rows()) + " rows");
  if (out_rows == 0) throw ShapeError("index_add: zero output rows");
  for (int r : rows)
    if (r < 0 || static_cast<std::size_t>(r) >= out_rows)
      throw std::out_of_range("index_add: index " + std::to_string(r) +
                              " outside " + std::to_string(out_rows));
  const std::size_t c = sv.cols();
  Tensor out = Mat(out_rows, c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double* dst = out.values().data() + rows[i] * c;
    const double* s = sv.values().data() + i * c;
    for (std::size_t j = 0; j < c; ++j) dst[j] += s[j];
  }
  return Rec("index_add", std::move(out), {src},
             [rows = std::move(rows), c](const Tensor&,
                                         std::span<const double> g,
                                         std::span<const InputGrad> in) {
               for (std::size_t i = 0; i < rows.size(); ++i) {
                 const double* s = g.data() + rows[i] * c;
                 double* dst = in[0].grad + i * c;
                 for (std::size_t j = 0; j < c; ++j) dst[j] += s[j];
               }
             });
}

Var Sum(Var a, int axis) {
  CheckAxis("sum", axis, true);
  const Tensor& av = a.value();
  const std::size_t r = av.rows(), c = av.cols();
  Tensor out = axis == -1 ? Mat(1, 1) : axis == 0 ? Mat(1, c) : Mat(r, 1);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      out.values()[axis == -1 ? 0 : axis == 0 ? j : i] += av(i, j);
  return Rec("sum", std::move(out), {a},
             [axis, r, c](const Tensor&, std::span<const double> g,
                          std::span<const InputGrad> in) {
               for (std::size_t i = 0; i < r; ++i)
                 for (std::size_t j = 0; j < c; ++j)
                   in[0].grad[i * c + j] +=
                       g[axis == -1 ? 0 : axis == 0 ? j : i];
             });
}

Var Mean(Var a, int axis) {
  const Tensor& av = a.value();
  const std::size_t n = axis == -1  ? av.numel()
                        : axis == 0 ? av.rows()
                                    : av.cols();
  return Scale(Sum(a, axis), 1.0 / static_cast<double>(n));
}

Var Max(Var a, int axis) {
  CheckAxis("max", axis, true);
  const Tensor& av = a.value();
  const std::size_t r = av.rows(), c = av.cols();
  const std::size_t groups = axis == -1 ? 1 : axis == 0 ? c : r;
  Tensor out = axis == -1 ? Mat(1, 1) : axis == 0 ? Mat(1, c) : Mat(r, 1);
  std::vector<std::size_t> argmax(groups, 0);
  std::vector<bool> seen(groups, false);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      const std::size_t gidx = axis == -1 ? 0 : axis == 0 ? j : i;
      if (!seen[gidx] || av(i, j) > out.values()[gidx]) {
        seen[gidx] = true;
        out.values()[gidx] = av(i, j);
        argmax[gidx] = i * c + j;
      }
    }
  return Rec("max", std::move(out), {a},
             [argmax = std::move(argmax)](const Tensor&,
                                          std::span<const double> g,
                                          std::span<const InputGrad> in) {
               for (std::size_t k = 0; k < argmax.size(); ++k)
                 in[0].grad[argmax[k]] += g[k];
             });
}

Var SegmentMax(Var a, std::vector<std::size_t> offsets) {
  const Tensor& av = a.value();
  CheckOffsets("segment_max", offsets, av.rows());
  const std::size_t c = av.cols(), groups = offsets.size() - 1;
  Tensor out = Mat(groups, c);
  std::vector<std::size_t> argmax(groups * c);
  for (std::size_t gi = 0; gi < groups; ++gi)
    for (std::size_t j = 0; j < c; ++j) {
      std::size_t best = offsets[gi];
      for (std::size_t i = offsets[gi] + 1; i < offsets[gi + 1]; ++i)
        if (av(i, j) > av(best, j)) best = i;
      out(gi, j) = av(best, j);
      argmax[gi * c + j] = best * c + j;
    }
  return Rec("segment_max", std::move(out), {a},
             [argmax = std::move(argmax)](const Tensor&,
                                          std::span<const double> g,
                                          std::span<const InputGrad> in) {
               for (std::size_t k = 0; k < argmax.size(); ++k)
                 in[0].grad[argmax[k]] += g[k];
             });
}

Var SegmentMean(Var a, std::vector<std::size_t> offsets) {
  const Tensor& av = a.value();
  CheckOffsets("segment_mean", offsets, av.rows());
  const std::size_t c = av.cols(), groups = offsets.size() - 1;
  Tensor out = Mat(groups, c);
  for (std::size_t gi = 0; gi < groups; ++gi) {
    const double n = static_cast<double>(offsets[gi + 1] - offsets[gi]);
    for (std::size_t j = 0; j < c; ++j) {
      double s = 0.0;
      for (std::size_t i = offsets[gi]; i < offsets[gi + 1]; ++i) s += av(i, j);
      out(gi, j) = s / n;
    }
  }
  return Rec("segment_mean", std::move(out), {a},
             [offsets = std::move(offsets), c](const Tensor&,
                                               std::span<const double> g,
                                               std::span<const InputGrad> in) {
               for (std::size_t gi = 0; gi + 1 < offsets.size(); ++gi) {
                 const double n =
                     static_cast<double>(offsets[gi + 1] - offsets[gi]);
                 for (std::size_t i = offsets[gi]; i < offsets[gi + 1]; ++i)
                   for (std::size_t j = 0; j < c; ++j)
                     in[0].grad[i * c + j] += g[gi * c + j] / n;
               }
             });
}

Var Dropout(Var a, double rate, std::mt19937_64& rng, bool training) {
  if (rate < 0.0 || rate >= 1.0)
    throw std::invalid_argument("dropout: rate must be in [0, 1)");
  if (!training || rate == 0.0) return a;
  const Tensor& av = a.value();
  const double keep = 1.0 - rate;
  std::bernoulli_distribution coin(keep);
  std::vector<double> mask(av.numel());
  for (double& m : mask) m = coin(rng) ? 1.0 / keep : 0.0;
  Tensor out = Mat(av.rows(), av.cols());
  for (std::size_t k = 0; k < mask.size(); ++k)
    out.values()[k] = av.values()[k] * mask[k];
  return Rec("dropout", std::move(out), {a},
             [mask = std::move(mask)](const Tensor&, std::span<const double> g,
                                      std::span<const InputGrad> in) {
               for (std::size_t k = 0; k < mask.size(); ++k)
                 in[0].grad[k] += g[k] * mask[k];
             });
}

namespace {

constexpr std::array<std::pair<OpKind, std::string_view>, 23> kOpNames{{
    {OpKind::kMatMul, "matmul"},
    {OpKind::kAdd, "add"},
    {OpKind::kSub, "sub"},
    {OpKind::kMul, "mul"},
    {OpKind::kScale, "scale"},
    {OpKind::kSigmoid, "sigmoid"},
    {OpKind::kTanh, "tanh"},
    {OpKind::kRelu, "relu"},
    {OpKind::kExp, "exp"},
    {OpKind::kLog, "log"},
    {OpKind::kRowSoftmax, "row_softmax"},
    {OpKind::kRowLogSoftmax, "row_log_softmax"},
    {OpKind::kConcat, "concat"},
    {OpKind::kSlice, "slice"},
    {OpKind::kGather, "gather"},
    {OpKind::kIndexAdd, "index_add"},
    {OpKind::kSum, "sum"},
    {OpKind::kMax, "max"},
    {OpKind::kMean, "mean"},
    {OpKind::kSegmentMax, "segment_max"},
    {OpKind::kSegmentMean, "segment_mean"},
    {OpKind::kTranspose, "transpose"},
    {OpKind::kDropout, "dropout"},
}};

void Arity(OpKind kind, std::span<const Var> inputs, std::size_t n) {
  if (inputs.size() != n)
    throw std::invalid_argument(std::string(OpName(kind)) + " expects " +
                                std::to_string(n) + " inputs, got " +
                                std::to_string(inputs.size()));
}

}  // namespace

OpKind ParseOpKind(std::string_view name) {
  for (const auto& [kind, n] : kOpNames)
    if (n == name) return kind;
  throw std::invalid_argument("unknown primitive '" + std::string(name) + "'");
}

std::string_view OpName(OpKind kind) {
  for (const auto& [k, n] : kOpNames)
    if (k == kind) return n;
  return "?";
}

Var Apply(OpKind kind, std::span<const Var> in, const OpAttrs& attrs) {
  switch (kind) {
    case OpKind::kConcat:
      return Concat(in, attrs.axis);
    case OpKind::kMatMul:
      Arity(kind, in, 2);
      return MatMul(in[0], in[1]);
    case OpKind::kAdd:
      Arity(kind, in, 2);
      return Add(in[0], in[1]);
    case OpKind::kSub:
      Arity(kind, in, 2);
      return Sub(in[0], in[1]);
    case OpKind::kMul:
      Arity(kind, in, 2);
      return Mul(in[0], in[1]);
    default:
      break;
  }
  Arity(kind, in, 1);
  const Var a = in[0];
  switch (kind) {
    case OpKind::kScale:
      return Scale(a, attrs.factor);
    case OpKind::kSigmoid:
      return Sigmoid(a);
    case OpKind::kTanh:
      return Tanh(a);
    case OpKind::kRelu:
      return Relu(a);
    case OpKind::kExp:
      return Exp(a);
    case OpKind::kLog:
      return Log(a);
    case OpKind::kRowSoftmax:
      return RowSoftmax(a);
    case OpKind::kRowLogSoftmax:
      return RowLogSoftmax(a);
    case OpKind::kSlice:
      return Slice(a, attrs.axis, attrs.begin, attrs.end);
    case OpKind::kGather:
      return Gather(a, attrs.indices);
    case OpKind::kIndexAdd:
      return IndexAdd(a, attrs.indices, attrs.out_rows);
    case OpKind::kSum:
      return Sum(a, attrs.axis);
    case OpKind::kMax:
      return Max(a, attrs.axis);
    case OpKind::kMean:
      return Mean(a, attrs.axis);
    case OpKind::kSegmentMax:
      return SegmentMax(a, attrs.offsets);
    case OpKind::kSegmentMean:
      return SegmentMean(a, attrs.offsets);
    case OpKind::kTranspose:
      return Transpose(a);
    case OpKind::kDropout:
      if (attrs.training && attrs.rng == nullptr)
        throw std::invalid_argument("dropout: training mode needs an rng");
      if (!attrs.training) return a;
      return Dropout(a, attrs.rate, *attrs.rng, attrs.training);
    default:
      break;
  }
  throw std::invalid_argument("unhandled primitive");
}

}  // namespace gsn::ad
