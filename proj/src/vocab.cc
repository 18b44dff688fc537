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

#include "gsn/vocab.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

namespace gsn::train {

Vocabulary::Vocabulary()
    : Vocabulary(std::vector<std::string>{std::string(kPadToken),
                                          std::string(kUnkToken)}) {}

Vocabulary::Vocabulary(std::vector<std::string> tokens)
    : tokens_(std::move(tokens)) {
  for (std::size_t i = 0; i < tokens_.size(); ++i)
    if (!index_.emplace(tokens_[i], static_cast<int>(i)).second)
      throw std::invalid_argument("duplicate vocabulary token '" + tokens_[i] +
                                  "'");
}

Vocabulary Vocabulary::Build(std::span<const std::vector<std::string>> streams,
                             std::size_t max_size) {
  if (max_size < 3) throw std::invalid_argument("vocabulary max size must be >= 3");
  std::map<std::string, std::size_t> counts;
  for (const auto& stream : streams)
    for (const auto& tok : stream)
      if (tok != kPadToken && tok != kUnkToken) ++counts[tok];
  if (counts.empty()) throw std::invalid_argument("empty corpus");
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(),
                                                          counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) {
                     return a.second > b.second;
                   });
  std::vector<std::string> tokens{std::string(kPadToken),
                                  std::string(kUnkToken)};
  for (const auto& [tok, n] : ranked) {
    if (tokens.size() >= max_size) break;
    tokens.push_back(tok);
  }
  return Vocabulary(std::move(tokens));
}

Vocabulary Vocabulary::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vocabulary " + path.string());
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tokens.push_back(line);
  }
  if (tokens.size() < 2 || tokens[0] != kPadToken || tokens[1] != kUnkToken)
    throw std::runtime_error("vocabulary " + path.string() +
                             " must start with <pad> and <unk>");
  return Vocabulary(std::move(tokens));
}

void Vocabulary::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& t : tokens_) out << t << '\n';
}

int Vocabulary::Lookup(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnk : it->second;
}

}  // namespace gsn::train
