// Copyright 2026 The qhomog Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Text parsers shared by the CLI: numbers, angle literals like "3pi/8", and
// single-qubit state specs. All failures are ConfigError with a position.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "qhomog/errors.hpp"
#include "qhomog/qstate.hpp"

namespace qhomog::io {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

[[noreturn]] inline void parse_fail(std::string_view what, std::string_view text, std::size_t pos, std::string_view msg) {
  throw ConfigError(std::string(what) + " '" + std::string(text) + "': " + std::string(msg) + " at position " +
                    std::to_string(pos));
}

// Whole-string real number; `offset` shifts reported positions when `s` is a
// slice of a longer text.
inline double parse_real(std::string_view s, std::string_view what = "number", std::string_view whole = {},
                         std::size_t offset = 0) {
  if (whole.empty()) whole = s;
  if (s.empty()) parse_fail(what, whole, offset, "expected a number");
  const char* first = s.data();
  if (*first == '+') ++first;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc{} || ptr == first)
    parse_fail(what, whole, offset + static_cast<std::size_t>(first - s.data()), "expected a number");
  if (ptr != s.data() + s.size()) parse_fail(what, whole, offset + static_cast<std::size_t>(ptr - s.data()), "unexpected character");
  if (!std::isfinite(v)) parse_fail(what, whole, offset, "value is not finite");
  return v;
}

inline std::uint64_t parse_uint(std::string_view s, std::string_view what = "integer") {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{}) parse_fail(what, s, 0, "expected a non-negative integer");
  if (ptr != s.data() + s.size()) parse_fail(what, s, static_cast<std::size_t>(ptr - s.data()), "unexpected character");
  return v;
}

inline bool parse_bool(std::string_view s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("boolean '" + std::string(s) + "': expected true or false");
}

// Radians, either a plain real or [-][coef][*]pi[/den], e.g. "pi/4", "-3pi/8".
inline double parse_angle(std::string_view text) {
  const std::string_view s = trim(text);
  const auto at = s.find("pi");
  if (at == std::string_view::npos) return parse_real(s, "angle", text);
  std::string_view head = s.substr(0, at);
  if (!head.empty() && head.back() == '*') head.remove_suffix(1);
  double coef = 1.0;
  if (head == "-")
    coef = -1.0;
  else if (!head.empty() && head != "+")
    coef = parse_real(head, "angle", text);
  double den = 1.0;
  const std::string_view tail = s.substr(at + 2);
  if (!tail.empty()) {
    if (tail.front() != '/') parse_fail("angle", text, at + 2, "expected '/' after pi");
    den = parse_real(tail.substr(1), "angle", text, at + 3);
    if (den == 0.0) parse_fail("angle", text, at + 3, "division by zero");
  }
  return coef * std::numbers::pi / den;
}

// zero | one | plus | minus | mixed | bloch:x,y,z | random:seed
inline DensityMatrix parse_state_spec(std::string_view text) {
  const std::string_view s = trim(text);
  if (s == "zero") return states::zero();
  if (s == "one") return states::one();
  if (s == "plus") return states::plus();
  if (s == "minus") return states::minus();
  if (s == "mixed") return states::maximally_mixed(2);
  if (s.starts_with("bloch:")) {
    const auto parts = split(s.substr(6), ',');
    if (parts.size() != 3) parse_fail("state spec", text, 6, "bloch needs exactly three components x,y,z");
    double r[3];
    std::size_t pos = 6;
    for (int i = 0; i < 3; ++i) {
      r[i] = parse_real(parts[static_cast<std::size_t>(i)], "state spec", text, pos);
      pos += parts[static_cast<std::size_t>(i)].size() + 1;
    }
    if (r[0] * r[0] + r[1] * r[1] + r[2] * r[2] > 1.0 + 1e-12)
      throw ConfigError("state spec '" + std::string(text) + "': Bloch vector norm exceeds 1");
    return states::from_bloch(r[0], r[1], r[2]);
  }
  if (s.starts_with("random:")) {
    const auto seed_text = s.substr(7);
    std::uint64_t seed = 0;
    const auto [ptr, ec] = std::from_chars(seed_text.data(), seed_text.data() + seed_text.size(), seed);
    if (seed_text.empty() || ec != std::errc{} || ptr != seed_text.data() + seed_text.size())
      parse_fail("state spec", text, 7 + static_cast<std::size_t>(ptr - seed_text.data()), "expected an integer seed");
    return random_density(2, seed);
  }
  const auto colon = s.find(':');
  parse_fail("state spec", text, 0,
             colon == std::string_view::npos ? "unknown state name" : "unknown state kind '" + std::string(s.substr(0, colon)) + "'");
}

}  // namespace qhomog::io
