// Copyright 2026 The MolTop Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "moltop/error.hpp"

namespace moltop {

//! N x T binary label matrix with a missing-value mask, both row-major.
//! A masked slot's value is meaningless and is kept at 0.
struct LabelMatrix {
  std::size_t rows = 0;
  std::size_t tasks = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> missing;

  static LabelMatrix zeros(std::size_t rows, std::size_t tasks) {
    return {rows, tasks, std::vector<double>(rows * tasks, 0.0),
            std::vector<std::uint8_t>(rows * tasks, 0)};
  }

  double at(std::size_t i, std::size_t t) const { return values[i * tasks + t]; }
  bool is_missing(std::size_t i, std::size_t t) const { return missing[i * tasks + t] != 0; }

  LabelMatrix select_rows(std::span<const std::size_t> idx) const {
    LabelMatrix out = zeros(idx.size(), tasks);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (idx[k] >= rows) throw DataError("label row " + std::to_string(idx[k]) + " out of range");
      for (std::size_t t = 0; t < tasks; ++t) {
        out.values[k * tasks + t] = at(idx[k], t);
        out.missing[k * tasks + t] = missing[idx[k] * tasks + t];
      }
    }
    return out;
  }

  friend bool operator==(const LabelMatrix&, const LabelMatrix&) = default;
};

}  // namespace moltop
