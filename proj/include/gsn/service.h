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

#include <atomic>
#include <cstddef>
#include <memory>
#include <string>

#include "gsn/index.h"
#include "gsn/model.h"
#include "gsn/vocab.h"

namespace gsn::cli {

struct HttpResponse {
  int status = 200;
  std::string body;
};

// Request handling for the search endpoint, independent of the transport.
// Read-only once loaded, so concurrent requests are safe.
class SearchService {
 public:
  SearchService() = default;

  // Publishes the model and index; requests before this answer 503.
  void Load(retrieval::VectorIndex index, train::DualEncoderModel model,
            train::Vocabulary vocab, retrieval::ScoreDisplay display,
            std::size_t node_cap);
  bool loaded() const { return state_ != nullptr; }

  // `q` and `k` are the raw query-string values (k may be absent).
  HttpResponse Search(const std::string* q, const std::string* k) const;
  HttpResponse Health() const;

 private:
  struct State {
    retrieval::VectorIndex index;
    mutable train::DualEncoderModel model;
    train::Vocabulary vocab;
    retrieval::ScoreDisplay display;
    std::size_t node_cap;
  };
  std::shared_ptr<const State> state_;
};

class HttpServer {
 public:
  explicit HttpServer(const SearchService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds `port` (0 picks a free one) and returns the bound port.
  int Bind(const std::string& host, int port);
  // Blocks until Stop() is called.
  void Listen();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gsn::cli
