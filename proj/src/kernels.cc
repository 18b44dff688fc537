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

#include "gsn/kernels.h"

#include <omp.h>

#include <cassert>
#include <cmath>

namespace gsn::kernels {
namespace {

constexpr std::size_t kParallelFlops = 1 << 15;

double Norm(const float* v, std::size_t dim) {
  double s = 0.0;
  for (std::size_t j = 0; j < dim; ++j) s += double(v[j]) * double(v[j]);
  return std::sqrt(s);
}

double Norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double CosineOne(std::span<const double> query, double query_norm,
                 const float* v, std::size_t dim) {
  const double vn = Norm(v, dim);
  if (query_norm == 0.0 || vn == 0.0) return 0.0;
  double dot = 0.0;
  for (std::size_t j = 0; j < dim; ++j) dot += query[j] * double(v[j]);
  return dot / (query_norm * vn);
}

}  // namespace

namespace serial {

void Gemm(ConstMatrixView a, ConstMatrixView b, MatrixView c,
          bool accumulate) {
  assert(a.cols == b.rows && c.rows == a.rows && c.cols == b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < b.cols; ++j) {
      double s = accumulate ? c.data[i * c.cols + j] : 0.0;
      for (std::size_t p = 0; p < a.cols; ++p)
        s += a.data[i * a.cols + p] * b.data[p * b.cols + j];
      c.data[i * c.cols + j] = s;
    }
  }
}

void GemmTN(ConstMatrixView a, ConstMatrixView b, MatrixView c,
            bool accumulate) {
  assert(a.rows == b.rows && c.rows == a.cols && c.cols == b.cols);
  for (std::size_t i = 0; i < a.cols; ++i) {
    for (std::size_t j = 0; j < b.cols; ++j) {
      double s = accumulate ? c.data[i * c.cols + j] : 0.0;
      for (std::size_t p = 0; p < a.rows; ++p)
        s += a.data[p * a.cols + i] * b.data[p * b.cols + j];
      c.data[i * c.cols + j] = s;
    }
  }
}

void GemmNT(ConstMatrixView a, ConstMatrixView b, MatrixView c,
            bool accumulate) {
  assert(a.cols == b.cols && c.rows == a.rows && c.cols == b.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < b.rows; ++j) {
      double s = accumulate ? c.data[i * c.cols + j] : 0.0;
      for (std::size_t p = 0; p < a.cols; ++p)
        s += a.data[i * a.cols + p] * b.data[j * b.cols + p];
      c.data[i * c.cols + j] = s;
    }
  }
}

void CosineScores(std::span<const double> query, std::span<const float> vectors,
                  std::size_t dim, std::span<double> scores) {
  assert(query.size() == dim && vectors.size() == scores.size() * dim);
  const double qn = Norm(query);
  for (std::size_t i = 0; i < scores.size(); ++i)
    scores[i] = CosineOne(query, qn, vectors.data() + i * dim, dim);
}

}  // namespace serial

namespace parallel {

void Gemm(ConstMatrixView a, ConstMatrixView b, MatrixView c,
          bool accumulate) {
  assert(a.cols == b.rows && c.rows == a.rows && c.cols == b.cols);
  const auto rows = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    double* crow = c.data + i * c.cols;
    if (!accumulate)
      for (std::size_t j = 0; j < c.cols; ++j) crow[j] = 0.0;
    const double* arow = a.data + i * a.cols;
    for (std::size_t p = 0; p < a.cols; ++p) {
      const double av = arow[p];
      const double* brow = b.data + p * b.cols;
      for (std::size_t j = 0; j < b.cols; ++j) crow[j] += av * brow[j];
    }
  }
}

void GemmTN(ConstMatrixView a, ConstMatrixView b, MatrixView c,
            bool accumulate) {
  assert(a.rows == b.rows && c.rows == a.cols && c.cols == b.cols);
  const auto rows = static_cast<std::ptrdiff_t>(c.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    double* crow = c.data + i * c.cols;
    if (!accumulate)
      for (std::size_t j = 0; j < c.cols; ++j) crow[j] = 0.0;
    for (std::size_t p = 0; p < a.rows; ++p) {
      const double av = a.data[p * a.cols + i];
      const double* brow = b.data + p * b.cols;
      for (std::size_t j = 0; j < b.cols; ++j) crow[j] += av * brow[j];
    }
  }
}

void GemmNT(ConstMatrixView a, ConstMatrixView b, MatrixView c,
            bool accumulate) {
  assert(a.cols == b.cols && c.rows == a.rows && c.cols == b.rows);
  const auto rows = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const double* arow = a.data + i * a.cols;
    for (std::size_t j = 0; j < b.rows; ++j) {
      const double* brow = b.data + j * b.cols;
      double s = accumulate ? c.data[i * c.cols + j] : 0.0;
      for (std::size_t p = 0; p < a.cols; ++p) s += arow[p] * brow[p];
      c.data[i * c.cols + j] = s;
    }
  }
}

void CosineScores(std::span<const double> query, std::span<const float> vectors,
                  std::size_t dim, std::span<double> scores) {
  assert(query.size() == dim && vectors.size() == scores.size() * dim);
  const double qn = Norm(query);
  const auto n = static_cast<std::ptrdiff_t>(scores.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    scores[i] = CosineOne(query, qn, vectors.data() + i * dim, dim);
}

}  // namespace parallel

void Gemm(ConstMatrixView a, ConstMatrixView b, MatrixView c,
          bool accumulate) {
  if (a.rows * a.cols * b.cols >= kParallelFlops && MaxThreads() > 1)
    parallel::Gemm(a, b, c, accumulate);
  else
    serial::Gemm(a, b, c, accumulate);
}

void GemmTN(ConstMatrixView a, ConstMatrixView b, MatrixView c,
            bool accumulate) {
  if (a.rows * a.cols * b.cols >= kParallelFlops && MaxThreads() > 1)
    parallel::GemmTN(a, b, c, accumulate);
  else
    serial::GemmTN(a, b, c, accumulate);
}

void GemmNT(ConstMatrixView a, ConstMatrixView b, MatrixView c,
            bool accumulate) {
  if (a.rows * a.cols * b.rows >= kParallelFlops && MaxThreads() > 1)
    parallel::GemmNT(a, b, c, accumulate);
  else
    serial::GemmNT(a, b, c, accumulate);
}

void CosineScores(std::span<const double> query, std::span<const float> vectors,
                  std::size_t dim, std::span<double> scores) {
  if (vectors.size() >= kParallelFlops && MaxThreads() > 1)
    parallel::CosineScores(query, vectors, dim, scores);
  else
    serial::CosineScores(query, vectors, dim, scores);
}

int MaxThreads() { return omp_get_max_threads(); }

}  // namespace gsn::kernels
