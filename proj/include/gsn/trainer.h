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
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gsn/corpus.h"
#include "gsn/model.h"
#include "gsn/optim.h"

namespace gsn::train {

struct TrainConfig {
  double lr = 0.01;
  double plateau_factor = 0.5;
  int plateau_patience = 2;
  int early_stop_patience = 10;
  int max_epochs = 100;
  double clip = 10.0;
  std::size_t batch_size = 32;
  std::uint64_t seed = 1;

  // Throws std::invalid_argument on a non-positive field.
  void Validate() const;
};

// Learning-rate reduction when a maximized metric stops improving. A
// reduction happens once the count of epochs without improvement exceeds
// `patience`; the count then restarts.
class PlateauScheduler {
 public:
  PlateauScheduler(double factor, int patience);
  // Returns true when the rate should be multiplied by the factor.
  bool Observe(double metric);
  double factor() const { return factor_; }

 private:
  double factor_;
  int patience_;
  double best_ = -1.0;
  int bad_epochs_ = 0;
  bool started_ = false;
};

// Stops after `patience` consecutive epochs without a new best metric.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience) : patience_(patience) {}
  // Returns true when training should stop after this epoch.
  bool Observe(double metric);
  bool improved() const { return improved_; }
  double best() const { return best_; }

 private:
  int patience_;
  double best_ = -1.0;
  int bad_epochs_ = 0;
  bool started_ = false;
  bool improved_ = false;
};

struct EpochRecord {
  int epoch = 0;
  double loss = 0.0;  // mean training batch loss
  double validation_mrr = 0.0;
  double lr = 0.0;
};

struct FitResult {
  DualEncoderModel model;  // parameters of the best validation epoch
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  double best_mrr = 0.0;
  bool stopped_early = false;
};

// Supplies the validation MRR after each epoch; the default ranks every
// validation summary against all validation programs.
using Validator = std::function<double(DualEncoderModel&)>;

// 1-based rank of each summary's own program among all programs, by cosine
// similarity with ties broken by position.
std::vector<std::size_t> PoolRanks(
    const std::vector<std::vector<double>>& code,
    const std::vector<std::vector<double>>& summaries);

double ValidationMrr(DualEncoderModel& model,
                     std::span<const EncodedPair> validation);

// Mean loss over one pass of `pairs` in fixed batches (eval mode).
double EvaluateLoss(DualEncoderModel& model, std::span<const EncodedPair> pairs,
                    std::size_t batch_size);

// One optimisation step on `batch` over `params` (the tensors `optimizer`
// updates); returns the batch loss.
double TrainStep(DualEncoderModel& model,
                 std::span<const EncodedPair* const> batch,
                 std::span<ad::Tensor* const> params, ad::Adam& optimizer,
                 double clip, std::mt19937_64& rng);

// `model` supplies the initial parameters and hyperparameters.
FitResult Fit(DualEncoderModel model, std::span<const EncodedPair> train,
              std::span<const EncodedPair> validation,
              const TrainConfig& config, const Validator& validator = {});

}  // namespace gsn::train
