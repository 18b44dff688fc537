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

#include <random>
#include <string>

namespace gsn::testing {

// Random MiniLang program. `straight_line` restricts it to assignments and
// calls.
inline std::string RandomProgram(std::mt19937_64& rng, bool straight_line,
                                 int statements = 8) {
  static const char* kVars[] = {"a", "b", "c", "fooBar", "x_y"};
  static const char* kOps[] = {"+", "-", "*", "/", ">", "<", "=="};
  auto pick = [&](int n) {
    return std::uniform_int_distribution<int>(0, n - 1)(rng);
  };
  auto term = [&]() -> std::string {
    if (pick(3) == 0) return std::to_string(pick(10));
    return kVars[pick(5)];
  };
  auto expr = [&]() {
    std::string e = term();
    for (int n = pick(3); n > 0; --n) e += std::string(" ") + kOps[pick(7)] + " " + term();
    return e;
  };
  std::string out;
  auto emit = [&](auto&& self, int depth, int count) -> void {
    const std::string indent(2 * depth, ' ');
    for (int s = 0; s < count; ++s) {
      const int kind = straight_line || depth >= 2 ? pick(2) : pick(4);
      switch (kind) {
        case 0:
          out += indent + kVars[pick(5)] + " = " + expr() + "\n";
          break;
        case 1:
          out += indent + "do_work(" + expr() + ", " + term() + ")\n";
          break;
        case 2:
          out += indent + "if " + expr() + ":\n";
          self(self, depth + 1, 1 + pick(3));
          if (pick(2)) {
            out += indent + "else:\n";
            self(self, depth + 1, 1 + pick(2));
          }
          break;
        default:
          out += indent + "while " + expr() + ":\n";
          self(self, depth + 1, 1 + pick(3));
      }
    }
  };
  emit(emit, 0, statements);
  return out;
}

}  // namespace gsn::testing
