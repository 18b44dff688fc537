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

#include "gsn/service.h"

#include <charconv>

#include "httplib.h"
#include "json.hpp"

namespace gsn::cli {

void SearchService::Load(retrieval::VectorIndex index,
                         train::DualEncoderModel model,
                         train::Vocabulary vocab,
                         retrieval::ScoreDisplay display,
                         std::size_t node_cap) {
  auto s = std::make_shared<State>(State{std::move(index), std::move(model),
                                         std::move(vocab), display, node_cap});
  std::atomic_store(&state_, std::shared_ptr<const State>(std::move(s)));
}

HttpResponse SearchService::Search(const std::string* q,
                                   const std::string* k) const {
  const auto state = std::atomic_load(&state_);
  auto error = [](int status, const std::string& message) {
    return HttpResponse{status, nlohmann::json{{"error", message}}.dump()};
  };
  if (!state) return error(503, "index not loaded");
  if (q == nullptr || q->empty()) return error(400, "missing query 'q'");
  std::size_t top = 10;
  if (k != nullptr) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(k->data(), k->data() + k->size(), v);
    if (ec != std::errc() || ptr != k->data() + k->size())
      return error(400, "k must be an integer");
    if (v < 1) return error(400, "k must be >= 1");
    top = static_cast<std::size_t>(v);
  }
  retrieval::RankedResult result;
  try {
    result = retrieval::Query(state->index, state->model, state->vocab, *q,
                              top, state->display, state->node_cap);
  } catch (const std::invalid_argument& e) {
    return error(400, e.what());
  }
  nlohmann::json body = nlohmann::json::array();
  for (const auto& item : result.items)
    body.push_back({{"id", item.id}, {"score", item.score}});
  return {200, body.dump()};
}

HttpResponse SearchService::Health() const {
  return {200, nlohmann::json{{"status", "ok"}, {"loaded", loaded()}}.dump()};
}

struct HttpServer::Impl {
  explicit Impl(const SearchService& s) : service(s) {}
  const SearchService& service;
  httplib::Server server;
};

HttpServer::HttpServer(const SearchService& service)
    : impl_(std::make_unique<Impl>(service)) {
  auto reply = [](httplib::Response& res, const HttpResponse& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  impl_->server.Get("/search", [this, reply](const httplib::Request& req,
                                              httplib::Response& res) {
    std::string q, k;
    const bool has_q = req.has_param("q"), has_k = req.has_param("k");
    if (has_q) q = req.get_param_value("q");
    if (has_k) k = req.get_param_value("k");
    reply(res, impl_->service.Search(has_q ? &q : nullptr,
                                     has_k ? &k : nullptr));
  });
  impl_->server.Get("/healthz",
                    [this, reply](const httplib::Request&,
                                  httplib::Response& res) {
                      reply(res, impl_->service.Health());
                    });
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  if (!impl_->server.bind_to_port(host, port)) return -1;
  return port;
}

void HttpServer::Listen() { impl_->server.listen_after_bind(); }

void HttpServer::Stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace gsn::cli
