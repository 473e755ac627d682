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

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace moltop {

enum class BondType : std::uint8_t { Single = 0, Double, Triple, Aromatic, Misc };

inline constexpr int kBondTypeCount = 5;
inline constexpr int kMaxAtomicNumber = 118;

std::string_view to_string(BondType t) noexcept;

struct Edge {
  int u = 0;
  int v = 0;
  BondType type = BondType::Single;

  friend bool operator==(const Edge&, const Edge&) = default;
};

//! Undirected heavy-atom graph of a molecule.
//!
//! Immutable once built. Edges are stored once with u < v and sorted by (u, v);
//! adjacency lists are sorted ascending and mirror the edge list exactly.
class MolecularGraph {
 public:
  MolecularGraph() = default;

  //! Validates and canonicalizes. Throws GraphError on self-loops, duplicate
  //! edges, out-of-range indices, atomic numbers outside [0, 118] or a
  //! length mismatch between node_count and atomic_numbers.
  static MolecularGraph build(int node_count, std::vector<int> atomic_numbers,
                              std::vector<Edge> edges);

  int node_count() const noexcept { return static_cast<int>(atomic_numbers_.size()); }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }

  std::span<const int> atomic_numbers() const noexcept { return atomic_numbers_; }
  std::span<const Edge> edges() const noexcept { return edges_; }

  //! Sorted neighbor indices of v. Throws GraphError if v is out of range.
  std::span<const int> neighbors(int v) const;

  //! Throws GraphError if v is out of range.
  int degree(int v) const;

  //! Unchecked variants for hot loops.
  std::span<const int> neighbors_unchecked(int v) const noexcept {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  int degree_unchecked(int v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  bool has_edge(int u, int v) const;

  //! Relabels nodes: node i of the result is node perm[i] of this graph.
  MolecularGraph permuted(std::span<const int> perm) const;

  friend bool operator==(const MolecularGraph& a, const MolecularGraph& b) {
    return a.atomic_numbers_ == b.atomic_numbers_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<int> atomic_numbers_;
  std::vector<Edge> edges_;
  std::vector<int> offsets_{0};
  std::vector<int> adj_;
};

using GraphCollection = std::vector<MolecularGraph>;

}  // namespace moltop
