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

#include "gsn/model.h"

#include <openssl/sha.h>

#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <random>

#include "binary_io.h"
#include "gsn/ops.h"

namespace gsn::io {

std::vector<std::uint8_t> ReadAll(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void WriteAll(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace gsn::io

namespace gsn::train {
namespace {

constexpr char kMagic[8] = {'G', 'S', 'N', 'C', 'K', 'P', 'T', '1'};
constexpr std::uint16_t kVersion = 1;
constexpr const char* kTogglesRecord = "config.toggles";

using Reader = io::ByteReader<CheckpointError>;

void PutTensor(io::ByteWriter& w, const std::string& name, const Tensor& t) {
  w.PutString(name);
  w.Put(static_cast<std::uint32_t>(t.rank()));
  for (std::size_t e : t.shape()) w.Put(static_cast<std::uint32_t>(e));
  for (double v : t.values()) w.Put(v);
}

std::vector<std::vector<double>> Encode(nn::EncoderParams& params,
                                        const nn::EncoderConfig& config,
                                        std::span<const nn::GraphInput> inputs,
                                        std::size_t batch) {
  std::vector<std::vector<double>> out;
  out.reserve(inputs.size());
  if (batch == 0) batch = 1;
  for (std::size_t begin = 0; begin < inputs.size(); begin += batch) {
    const auto chunk =
        inputs.subspan(begin, std::min(batch, inputs.size() - begin));
    ad::Tape tape;
    nn::BoundParams p = nn::Bind(tape, params);
    const nn::GraphBatch gb = nn::GraphBatch::Make(chunk);
    const Var r = nn::EncodeBatch(p, config, gb, nn::RunMode{});
    const Tensor& v = r.value();
    for (std::size_t i = 0; i < v.rows(); ++i) {
      const auto row = v.values().subspan(i * v.cols(), v.cols());
      out.emplace_back(row.begin(), row.end());
    }
  }
  return out;
}

}  // namespace

nn::EncoderConfig ModelConfig::CodeEncoder() const {
  return {dim, hops_code, heads, biggnn_code, attention_code, dropout};
}

nn::EncoderConfig ModelConfig::SummaryEncoder() const {
  return {dim, hops_summary, heads, biggnn_summary, attention_summary,
          dropout};
}

void ModelConfig::Validate() const {
  if (dim < 1) throw std::invalid_argument("dim must be positive");
  if (dropout < 0.0 || dropout >= 1.0)
    throw std::invalid_argument("dropout must lie in [0, 1)");
  try {
    CodeEncoder().Validate();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("code encoder: ") + e.what());
  }
  try {
    SummaryEncoder().Validate();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("summary encoder: ") + e.what());
  }
}

DualEncoderModel::DualEncoderModel(const ModelConfig& config,
                                   std::size_t vocab_size, std::uint64_t seed)
    : config_(config), vocab_size_(vocab_size) {
  config_.Validate();
  if (vocab_size < 1) throw std::invalid_argument("empty vocabulary");
  std::mt19937_64 rng(seed);
  code_ = nn::EncoderParams::Init(vocab_size, config.dim, rng);
  summary_ = nn::EncoderParams::Init(vocab_size, config.dim, rng);
}

std::vector<std::pair<std::string, Tensor*>> DualEncoderModel::Named() {
  std::vector<std::pair<std::string, Tensor*>> out;
  for (auto& [n, t] : code_.Named()) out.emplace_back("code." + n, t);
  for (auto& [n, t] : summary_.Named()) out.emplace_back("summary." + n, t);
  return out;
}

std::vector<std::pair<std::string, const Tensor*>> DualEncoderModel::Named()
    const {
  std::vector<std::pair<std::string, const Tensor*>> out;
  for (auto& [n, t] : code_.Named()) out.emplace_back("code." + n, t);
  for (auto& [n, t] : summary_.Named()) out.emplace_back("summary." + n, t);
  return out;
}

std::vector<Tensor*> DualEncoderModel::PrepareTrainable() {
  code_.SetRequiresGrad(false);
  summary_.SetRequiresGrad(false);
  std::vector<Tensor*> out = code_.Trainable(config_.CodeEncoder());
  for (Tensor* t : summary_.Trainable(config_.SummaryEncoder()))
    out.push_back(t);
  for (Tensor* t : out) t->set_requires_grad(true);
  return out;
}

std::vector<std::vector<double>> DualEncoderModel::EncodeCode(
    std::span<const nn::GraphInput> inputs, std::size_t batch) {
  return Encode(code_, config_.CodeEncoder(), inputs, batch);
}

std::vector<std::vector<double>> DualEncoderModel::EncodeSummary(
    std::span<const nn::GraphInput> inputs, std::size_t batch) {
  return Encode(summary_, config_.SummaryEncoder(), inputs, batch);
}

std::vector<std::uint8_t> DualEncoderModel::Serialize() const {
  io::ByteWriter w;
  w.PutBytes(std::span(reinterpret_cast<const std::uint8_t*>(kMagic), 8));
  w.Put(kVersion);
  for (int v : {config_.dim, config_.hops_code, config_.hops_summary,
                config_.heads})
    w.Put(static_cast<std::uint32_t>(v));
  w.Put(static_cast<std::uint32_t>(vocab_size_));
  Tensor toggles({4}, {double(config_.biggnn_code),
                       double(config_.attention_code),
                       double(config_.biggnn_summary),
                       double(config_.attention_summary)});
  PutTensor(w, kTogglesRecord, toggles);
  for (const auto& [name, t] : Named()) PutTensor(w, name, *t);
  return std::move(w.bytes());
}

DualEncoderModel DualEncoderModel::Deserialize(
    std::span<const std::uint8_t> bytes, const ModelConfig* expected) {
  Reader r(bytes);
  const auto magic = r.GetBytes(8, "magic");
  if (!std::equal(magic.begin(), magic.end(),
                  reinterpret_cast<const std::uint8_t*>(kMagic)))
    throw CheckpointError("bad checkpoint magic");
  const auto version = r.Get<std::uint16_t>("version");
  if (version != kVersion)
    throw CheckpointError("unsupported checkpoint version " +
                          std::to_string(version));
  DualEncoderModel m;
  m.config_.dim = static_cast<int>(r.Get<std::uint32_t>("dim"));
  m.config_.hops_code = static_cast<int>(r.Get<std::uint32_t>("hops_code"));
  m.config_.hops_summary =
      static_cast<int>(r.Get<std::uint32_t>("hops_summary"));
  m.config_.heads = static_cast<int>(r.Get<std::uint32_t>("heads"));
  m.vocab_size_ = r.Get<std::uint32_t>("vocab size");
  if (expected != nullptr) {
    auto check = [](const char* what, int file, int want) {
      if (file != want)
        throw CheckpointError(std::string("checkpoint has ") + what + " " +
                              std::to_string(file) + " but the config requests " +
                              what + " " + std::to_string(want));
    };
    check("dim", m.config_.dim, expected->dim);
    check("hops_code", m.config_.hops_code, expected->hops_code);
    check("hops_summary", m.config_.hops_summary, expected->hops_summary);
    check("heads", m.config_.heads, expected->heads);
    m.config_.dropout = expected->dropout;
  }

  std::map<std::string, Tensor*> slots;
  if (m.config_.dim < 1 || m.vocab_size_ < 1)
    throw CheckpointError("checkpoint declares an empty model");
  // Correctly shaped tensors for the records to overwrite.
  std::mt19937_64 unused(0);
  m.code_ = nn::EncoderParams::Init(m.vocab_size_, m.config_.dim, unused);
  m.summary_ = m.code_;
  for (auto& [name, t] : m.Named()) slots[name] = t;
  std::map<std::string, bool> seen;
  bool have_toggles = false;
  while (!r.done()) {
    const std::string name = r.GetString("record name");
    const auto rank = r.Get<std::uint32_t>("record rank");
    if (rank > 8) throw CheckpointError("record '" + name + "' has rank " +
                                        std::to_string(rank));
    ad::Shape shape;
    std::size_t numel = 1;
    for (std::uint32_t i = 0; i < rank; ++i) {
      shape.push_back(r.Get<std::uint32_t>("record extents"));
      numel *= shape.back();
    }
    if (numel * sizeof(double) > r.remaining())
      throw CheckpointError("truncated file while reading record '" + name +
                            "'");
    std::vector<double> values(numel);
    for (double& v : values) v = r.Get<double>("record values");
    if (name == kTogglesRecord) {
      if (numel != 4)
        throw CheckpointError("toggle record must hold 4 values");
      m.config_.biggnn_code = values[0] != 0.0;
      m.config_.attention_code = values[1] != 0.0;
      m.config_.biggnn_summary = values[2] != 0.0;
      m.config_.attention_summary = values[3] != 0.0;
      have_toggles = true;
      continue;
    }
    auto it = slots.find(name);
    if (it == slots.end())
      throw CheckpointError("unknown checkpoint record '" + name + "'");
    if (it->second->shape() != shape)
      throw CheckpointError("record '" + name + "' has shape " +
                            ad::ShapeString(shape) + ", expected " +
                            ad::ShapeString(it->second->shape()));
    std::copy(values.begin(), values.end(), it->second->values().begin());
    seen[name] = true;
  }
  for (const auto& [name, t] : slots)
    if (!seen.count(name))
      throw CheckpointError("checkpoint lacks record '" + name + "'");
  if (!have_toggles) throw CheckpointError("checkpoint lacks component toggles");
  try {
    m.config_.Validate();
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(std::string("checkpoint hyperparameters: ") +
                          e.what());
  }
  return m;
}

void DualEncoderModel::Save(const std::filesystem::path& path) const {
  io::WriteAll(path.string(), Serialize());
}

DualEncoderModel DualEncoderModel::Load(const std::filesystem::path& path,
                                        const ModelConfig* expected) {
  std::vector<std::uint8_t> bytes;
  try {
    bytes = io::ReadAll(path.string());
  } catch (const std::runtime_error& e) {
    throw CheckpointError(e.what());
  }
  return Deserialize(bytes, expected);
}

Fingerprint DualEncoderModel::fingerprint() const {
  return Sha256(Serialize());
}

Var BatchLoss(Var code, Var summary) {
  if (code.rows() != summary.rows() || code.cols() != summary.cols())
    throw ad::ShapeError("batch loss: code and summary encodings differ in "
                         "shape");
  if (!code.value().AllFinite() || !summary.value().AllFinite())
    throw ad::NumericError("batch loss: non-finite encodings");
  const std::size_t n = code.rows();
  Var scores = ad::MatMul(summary, ad::Transpose(code));
  Var log_probs = ad::RowLogSoftmax(scores);
  Var diagonal =
      ad::Mul(log_probs, code.tape().Constant(Tensor::Identity(n)));
  return ad::Scale(ad::Sum(diagonal, -1), -1.0 / static_cast<double>(n));
}

double BatchLossValue(const Tensor& code, const Tensor& summary) {
  ad::Tape tape;
  return BatchLoss(tape.Constant(code), tape.Constant(summary)).value().item();
}

Fingerprint Sha256(std::span<const std::uint8_t> bytes) {
  Fingerprint out;
  SHA256(bytes.data(), bytes.size(), out.data());
  return out;
}

std::string HexDigest(const Fingerprint& digest) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s;
  for (std::uint8_t b : digest) {
    s += kHex[b >> 4];
    s += kHex[b & 15];
  }
  return s;
}

}  // namespace gsn::train
