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

#include "gsn/config.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace gsn::cli {
namespace {

std::string_view Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void Bad(std::string_view key, std::string_view value,
                      const char* want) {
  throw ConfigError("config key '" + std::string(key) + "': cannot parse '" +
                    std::string(value) + "' as " + want);
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view value, const char* want) {
  T out{};
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) Bad(key, value, want);
  return out;
}

double ParseDouble(std::string_view key, std::string_view value) {
  // std::from_chars for double is unavailable in older libstdc++ builds.
  std::string s(value);
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    Bad(key, value, "a number");
  }
  if (used != s.size()) Bad(key, value, "a number");
  return out;
}

bool ParseBool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "on" || value == "yes")
    return true;
  if (value == "false" || value == "0" || value == "off" || value == "no")
    return false;
  Bad(key, value, "a boolean");
}

using Setter = std::function<void(Config&, std::string_view, std::string_view)>;

const std::vector<std::pair<std::string, Setter>>& Setters() {
  auto int_field = [](auto member) -> Setter {
    return [member](Config& c, std::string_view k, std::string_view v) {
      member(c) = ParseNumber<int>(k, v, "an integer");
    };
  };
  auto size_field = [](auto member) -> Setter {
    return [member](Config& c, std::string_view k, std::string_view v) {
      member(c) = ParseNumber<std::size_t>(k, v, "a non-negative integer");
    };
  };
  auto double_field = [](auto member) -> Setter {
    return [member](Config& c, std::string_view k, std::string_view v) {
      member(c) = ParseDouble(k, v);
    };
  };
  auto bool_field = [](auto member) -> Setter {
    return [member](Config& c, std::string_view k, std::string_view v) {
      member(c) = ParseBool(k, v);
    };
  };
  auto string_field = [](auto member) -> Setter {
    return [member](Config& c, std::string_view, std::string_view v) {
      member(c) = std::string(v);
    };
  };
  static const std::vector<std::pair<std::string, Setter>> setters = {
      {"dim", int_field([](Config& c) -> int& { return c.model.dim; })},
      {"hops_code",
       int_field([](Config& c) -> int& { return c.model.hops_code; })},
      {"hops_summary",
       int_field([](Config& c) -> int& { return c.model.hops_summary; })},
      {"heads", int_field([](Config& c) -> int& { return c.model.heads; })},
      {"dropout",
       double_field([](Config& c) -> double& { return c.model.dropout; })},
      {"biggnn_code",
       bool_field([](Config& c) -> bool& { return c.model.biggnn_code; })},
      {"attention_code",
       bool_field([](Config& c) -> bool& { return c.model.attention_code; })},
      {"biggnn_summary",
       bool_field([](Config& c) -> bool& { return c.model.biggnn_summary; })},
      {"attention_summary", bool_field([](Config& c) -> bool& {
         return c.model.attention_summary;
       })},
      {"lr", double_field([](Config& c) -> double& { return c.train.lr; })},
      {"plateau_factor", double_field([](Config& c) -> double& {
         return c.train.plateau_factor;
       })},
      {"plateau_patience",
       int_field([](Config& c) -> int& { return c.train.plateau_patience; })},
      {"early_stop_patience", int_field([](Config& c) -> int& {
         return c.train.early_stop_patience;
       })},
      {"max_epochs",
       int_field([](Config& c) -> int& { return c.train.max_epochs; })},
      {"clip", double_field([](Config& c) -> double& { return c.train.clip; })},
      {"batch_size", size_field([](Config& c) -> std::size_t& {
         return c.train.batch_size;
       })},
      {"seed", [](Config& c, std::string_view k, std::string_view v) {
         c.train.seed = ParseNumber<std::uint64_t>(k, v, "an unsigned integer");
       }},
      {"node_cap",
       size_field([](Config& c) -> std::size_t& { return c.node_cap; })},
      {"vocab_size",
       size_field([](Config& c) -> std::size_t& { return c.vocab_size; })},
      {"attention_subtokens",
       bool_field([](Config& c) -> bool& { return c.attention_subtokens; })},
      {"score_display",
       [](Config& c, std::string_view k, std::string_view v) {
         if (v == "raw")
           c.score_display = retrieval::ScoreDisplay::kRaw;
         else if (v == "plus-one")
           c.score_display = retrieval::ScoreDisplay::kPlusOne;
         else
           Bad(k, v, "raw or plus-one");
       }},
      {"corpus",
       string_field([](Config& c) -> std::string& { return c.corpus; })},
      {"validation_corpus", string_field([](Config& c) -> std::string& {
         return c.validation_corpus;
       })},
      {"test_corpus",
       string_field([](Config& c) -> std::string& { return c.test_corpus; })},
      {"vocab", string_field([](Config& c) -> std::string& { return c.vocab; })},
      {"checkpoint",
       string_field([](Config& c) -> std::string& { return c.checkpoint; })},
      {"index", string_field([](Config& c) -> std::string& { return c.index; })},
      {"relations",
       string_field([](Config& c) -> std::string& { return c.relations; })},
  };
  return setters;
}

}  // namespace

void Config::Validate() const {
  try {
    model.Validate();
    train.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (node_cap < 1) throw ConfigError("node_cap must be positive");
  if (vocab_size < 3) throw ConfigError("vocab_size must be >= 3");
}

void ApplySetting(Config& config, std::string_view key,
                  std::string_view value) {
  for (const auto& [name, setter] : Setters()) {
    if (name == key) {
      setter(config, key, value);
      return;
    }
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

Config ParseConfig(std::string_view text) {
  Config config;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    const auto key = Trim(line.substr(0, eq));
    const auto value = Trim(line.substr(eq + 1));
    try {
      ApplySetting(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " +
                        e.what());
    }
  }
  config.Validate();
  return config;
}

Config LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseConfig(buf.str());
}

const std::vector<std::string>& ConfigKeys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [name, setter] : Setters()) out.push_back(name);
    return out;
  }();
  return keys;
}

}  // namespace gsn::cli
