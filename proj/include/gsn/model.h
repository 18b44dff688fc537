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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gsn/encoders.h"
#include "gsn/tape.h"
#include "gsn/tensor.h"

namespace gsn::train {

using ad::Tensor;
using ad::Var;

// Shared hyperparameters of the two encoders.
struct ModelConfig {
  int dim = 128;
  int hops_code = 4;
  int hops_summary = 3;
  int heads = 2;
  bool biggnn_code = true;
  bool attention_code = true;
  bool biggnn_summary = true;
  bool attention_summary = true;
  double dropout = 0.3;

  nn::EncoderConfig CodeEncoder() const;
  nn::EncoderConfig SummaryEncoder() const;
  void Validate() const;
};

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Fingerprint = std::array<std::uint8_t, 32>;

// Separately parameterized program encoder (f_c) and summary encoder (f_s).
class DualEncoderModel {
 public:
  DualEncoderModel() = default;
  DualEncoderModel(const ModelConfig& config, std::size_t vocab_size,
                   std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  // Dropout only matters in training; changing it keeps the parameters.
  void set_dropout(double rate) { config_.dropout = rate; }
  std::size_t vocab_size() const { return vocab_size_; }

  nn::EncoderParams& code() { return code_; }
  nn::EncoderParams& summary() { return summary_; }
  const nn::EncoderParams& code() const { return code_; }
  const nn::EncoderParams& summary() const { return summary_; }

  // "code.<name>" and "summary.<name>" in a fixed order.
  std::vector<std::pair<std::string, Tensor*>> Named();
  std::vector<std::pair<std::string, const Tensor*>> Named() const;
  // Parameters the enabled components use; marks exactly these as
  // requiring gradients.
  std::vector<Tensor*> PrepareTrainable();

  // Eval-mode encodings, one row of length 2d per input.
  std::vector<std::vector<double>> EncodeCode(
      std::span<const nn::GraphInput> inputs, std::size_t batch = 64);
  std::vector<std::vector<double>> EncodeSummary(
      std::span<const nn::GraphInput> inputs, std::size_t batch = 64);

  std::vector<std::uint8_t> Serialize() const;
  // When `expected` is given, its dim/hops/heads must match the file.
  static DualEncoderModel Deserialize(std::span<const std::uint8_t> bytes,
                                      const ModelConfig* expected = nullptr);
  void Save(const std::filesystem::path& path) const;
  static DualEncoderModel Load(const std::filesystem::path& path,
                               const ModelConfig* expected = nullptr);

  // SHA-256 of the serialized checkpoint.
  Fingerprint fingerprint() const;

 private:
  ModelConfig config_;
  std::size_t vocab_size_ = 0;
  nn::EncoderParams code_;
  nn::EncoderParams summary_;
};

// -(1/n) sum_i log softmax_j(r_j . r'_i)[i] for code rows r and summary rows
// r'. Throws NumericError on non-finite encodings.
Var BatchLoss(Var code, Var summary);
double BatchLossValue(const Tensor& code, const Tensor& summary);

Fingerprint Sha256(std::span<const std::uint8_t> bytes);
std::string HexDigest(const Fingerprint& digest);

}  // namespace gsn::train
