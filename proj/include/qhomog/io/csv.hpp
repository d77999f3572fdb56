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

// CSV with a leading '#' metadata block, and the FNV-1a hash used to tag it.

#include <cstdint>
#include <cstdio>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qhomog/errors.hpp"

namespace qhomog::io {

inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Round-trip exact and locale independent.
inline std::string format_real(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvTable {
 public:
  CsvTable(std::string schema, int version, std::vector<std::string> header)
      : schema_(std::move(schema)), version_(version), header_(std::move(header)) {}

  void meta(std::string key, std::string value) { meta_.emplace_back(std::move(key), std::move(value)); }

  void row(std::vector<std::string> cells) {
    if (cells.size() != header_.size())
      throw InvariantError("csv " + schema_ + ": row has " + std::to_string(cells.size()) + " cells, header has " +
                           std::to_string(header_.size()));
    rows_.push_back(std::move(cells));
  }

  const std::vector<std::string>& header() const { return header_; }
  std::size_t size() const { return rows_.size(); }

  std::string render() const {
    std::string out = "# schema=" + schema_ + "/" + std::to_string(version_) + "\n";
    for (const auto& [k, v] : meta_) out += "# " + k + "=" + v + "\n";
    append_line(out, header_);
    for (const auto& r : rows_) append_line(out, r);
    return out;
  }

 private:
  static void append_line(std::string& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  }

  std::string schema_;
  int version_;
  std::vector<std::string> header_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace qhomog::io
