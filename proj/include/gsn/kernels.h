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
#include <span>

// Dense kernels behind the tensor engine and the vector index.
//
// Every kernel has a serial reference and an OpenMP variant. Both variants
// accumulate each output element over the reduction index in ascending
// order, so they produce bit-identical results; tests rely on that, and so
// does the receptive-field invariant (an output row only ever reads the
// matching input row).
namespace gsn::kernels {

// Row-major, densely packed matrix views used by the GEMM family below.
struct ConstMatrixView {
  const double* data;
  std::size_t rows;
  std::size_t cols;
};

struct MatrixView {
  double* data;
  std::size_t rows;
  std::size_t cols;
};

namespace serial {

// C (+)= A * B
void Gemm(ConstMatrixView a, ConstMatrixView b, MatrixView c, bool accumulate);
// C (+)= A^T * B
void GemmTN(ConstMatrixView a, ConstMatrixView b, MatrixView c,
            bool accumulate);
// C (+)= A * B^T
void GemmNT(ConstMatrixView a, ConstMatrixView b, MatrixView c,
            bool accumulate);

// scores[i] = cos(query, vectors[i]); zero-norm operands score 0.
void CosineScores(std::span<const double> query, std::span<const float> vectors,
                  std::size_t dim, std::span<double> scores);

}  // namespace serial

namespace parallel {

void Gemm(ConstMatrixView a, ConstMatrixView b, MatrixView c, bool accumulate);
void GemmTN(ConstMatrixView a, ConstMatrixView b, MatrixView c,
            bool accumulate);
void GemmNT(ConstMatrixView a, ConstMatrixView b, MatrixView c,
            bool accumulate);
void CosineScores(std::span<const double> query, std::span<const float> vectors,
                  std::size_t dim, std::span<double> scores);

}  // namespace parallel

// Dispatching entry points: small problems stay serial, large ones go to the
// OpenMP variant.
void Gemm(ConstMatrixView a, ConstMatrixView b, MatrixView c, bool accumulate);
void GemmTN(ConstMatrixView a, ConstMatrixView b, MatrixView c,
            bool accumulate);
void GemmNT(ConstMatrixView a, ConstMatrixView b, MatrixView c,
            bool accumulate);
void CosineScores(std::span<const double> query, std::span<const float> vectors,
                  std::size_t dim, std::span<double> scores);

// Number of OpenMP threads the parallel variants will use.
int MaxThreads();

}  // namespace gsn::kernels
