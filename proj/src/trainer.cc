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

#include "gsn/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gsn/metrics.h"

namespace gsn::train {

void TrainConfig::Validate() const {
  if (!(lr > 0.0)) throw std::invalid_argument("lr must be positive");
  if (!(plateau_factor > 0.0 && plateau_factor < 1.0))
    throw std::invalid_argument("plateau_factor must lie in (0, 1)");
  if (plateau_patience < 1)
    throw std::invalid_argument("plateau_patience must be positive");
  if (early_stop_patience < 1)
    throw std::invalid_argument("early_stop_patience must be positive");
  if (max_epochs < 1) throw std::invalid_argument("max_epochs must be positive");
  if (!(clip > 0.0)) throw std::invalid_argument("clip must be positive");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be positive");
}

PlateauScheduler::PlateauScheduler(double factor, int patience)
    : factor_(factor), patience_(patience) {}

bool PlateauScheduler::Observe(double metric) {
  if (!started_ || metric > best_) {
    started_ = true;
    best_ = metric;
    bad_epochs_ = 0;
    return false;
  }
  if (++bad_epochs_ > patience_) {
    bad_epochs_ = 0;
    return true;
  }
  return false;
}

bool EarlyStopping::Observe(double metric) {
  improved_ = !started_ || metric > best_;
  if (improved_) {
    started_ = true;
    best_ = metric;
    bad_epochs_ = 0;
    return false;
  }
  return ++bad_epochs_ >= patience_;
}

std::vector<std::size_t> PoolRanks(
    const std::vector<std::vector<double>>& code,
    const std::vector<std::vector<double>>& summaries) {
  if (code.size() != summaries.size())
    throw std::invalid_argument("pool ranks need paired encodings");
  auto norm = [](const std::vector<double>& v) {
    return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  };
  std::vector<double> code_norm(code.size());
  for (std::size_t j = 0; j < code.size(); ++j) code_norm[j] = norm(code[j]);
  std::vector<std::size_t> ranks;
  std::vector<double> scores(code.size());
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    const double qn = norm(summaries[i]);
    for (std::size_t j = 0; j < code.size(); ++j) {
      const double denom = qn * code_norm[j];
      scores[j] = denom == 0.0 ? 0.0
                               : std::inner_product(summaries[i].begin(),
                                                    summaries[i].end(),
                                                    code[j].begin(), 0.0) /
                                     denom;
    }
    ranks.push_back(retrieval::RankOf(scores, i));
  }
  return ranks;
}

double ValidationMrr(DualEncoderModel& model,
                     std::span<const EncodedPair> validation) {
  std::vector<nn::GraphInput> code, summary;
  for (const EncodedPair& p : validation) {
    code.push_back(p.code);
    summary.push_back(p.summary);
  }
  const auto ranks =
      PoolRanks(model.EncodeCode(code), model.EncodeSummary(summary));
  return retrieval::MeanReciprocalRank(ranks);
}

namespace {

Var EncodeSide(ad::Tape& tape, nn::EncoderParams& params,
               const nn::EncoderConfig& config,
               const std::vector<const nn::GraphInput*>& inputs,
               const nn::RunMode& mode) {
  const nn::BoundParams p = nn::Bind(tape, params);
  const nn::GraphBatch batch = nn::GraphBatch::Make(inputs);
  return nn::EncodeBatch(p, config, batch, mode);
}

}  // namespace

double EvaluateLoss(DualEncoderModel& model, std::span<const EncodedPair> pairs,
                    std::size_t batch_size) {
  if (pairs.empty()) throw std::invalid_argument("no pairs to evaluate");
  double total = 0.0;
  std::size_t batches = 0;
  for (std::size_t b = 0; b < pairs.size(); b += batch_size) {
    std::vector<const nn::GraphInput*> code, summary;
    for (std::size_t i = b; i < std::min(pairs.size(), b + batch_size); ++i) {
      code.push_back(&pairs[i].code);
      summary.push_back(&pairs[i].summary);
    }
    ad::Tape tape;
    const Var rc = EncodeSide(tape, model.code(), model.config().CodeEncoder(),
                              code, {});
    const Var rs = EncodeSide(tape, model.summary(),
                              model.config().SummaryEncoder(), summary, {});
    total += BatchLoss(rc, rs).value().item();
    ++batches;
  }
  return total / static_cast<double>(batches);
}

double TrainStep(DualEncoderModel& model,
                 std::span<const EncodedPair* const> batch,
                 std::span<ad::Tensor* const> params, ad::Adam& optimizer,
                 double clip, std::mt19937_64& rng) {
  std::vector<const nn::GraphInput*> code, summary;
  for (const EncodedPair* p : batch) {
    code.push_back(&p->code);
    summary.push_back(&p->summary);
  }
  const nn::RunMode mode{true, &rng};
  ad::Tape tape;
  const Var rc =
      EncodeSide(tape, model.code(), model.config().CodeEncoder(), code, mode);
  const Var rs = EncodeSide(tape, model.summary(),
                            model.config().SummaryEncoder(), summary, mode);
  const Var loss = BatchLoss(rc, rs);
  tape.Backward(loss);
  ad::ClipGradNorm(params, clip);
  optimizer.Step();
  return loss.value().item();
}

FitResult Fit(DualEncoderModel model, std::span<const EncodedPair> train,
              std::span<const EncodedPair> validation,
              const TrainConfig& config, const Validator& validator) {
  config.Validate();
  if (train.empty()) throw std::invalid_argument("empty training set");
  if (validation.empty() && !validator)
    throw std::invalid_argument("empty validation set");
  std::mt19937_64 rng(config.seed);
  const std::vector<ad::Tensor*> params = model.PrepareTrainable();
  ad::Adam optimizer(params, {.lr = config.lr});
  PlateauScheduler plateau(config.plateau_factor, config.plateau_patience);
  EarlyStopping stopper(config.early_stop_patience);

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  FitResult result;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t b = 0; b < order.size(); b += config.batch_size) {
      std::vector<const EncodedPair*> batch;
      for (std::size_t i = b; i < std::min(order.size(), b + config.batch_size);
           ++i)
        batch.push_back(&train[order[i]]);
      try {
        loss_sum += TrainStep(model, batch, params, optimizer, config.clip, rng);
      } catch (const ad::NumericError& e) {
        throw ad::NumericError("training diverged at epoch " +
                               std::to_string(epoch) + ", batch " +
                               std::to_string(batches + 1) + " (lr " +
                               std::to_string(optimizer.lr()) + "): " +
                               e.what());
      }
      ++batches;
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.loss = loss_sum / static_cast<double>(batches);
    rec.lr = optimizer.lr();
    rec.validation_mrr =
        validator ? validator(model) : ValidationMrr(model, validation);
    result.history.push_back(rec);

    const bool stop = stopper.Observe(rec.validation_mrr);
    if (stopper.improved()) {
      result.model = model;
      result.best_epoch = epoch;
      result.best_mrr = rec.validation_mrr;
    }
    if (plateau.Observe(rec.validation_mrr))
      optimizer.set_lr(optimizer.lr() * plateau.factor());
    if (stop) {
      result.stopped_early = true;
      break;
    }
  }
  result.model.code().SetRequiresGrad(false);
  result.model.summary().SetRequiresGrad(false);
  return result;
}

}  // namespace gsn::train
