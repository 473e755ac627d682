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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "moltop/molgraph.hpp"

namespace moltop {

enum class FingerprintMode { Histogram, Exact };

std::string_view to_string(FingerprintMode m) noexcept;
FingerprintMode parse_fingerprint_mode(std::string_view name);  // "histogram" or "exact"

//! Order of the eight topological spans inside a fingerprint.
inline constexpr const char* kTopoSpans[8] = {"deg", "min", "max", "mean", "std", "ebc", "ari", "scan"};

//! Integer encoding of the eight topological features of a graph.
//!
//! Histogram mode: bin counts of every span, concatenated. Exact mode: for
//! each span a length prefix followed by the sorted value multiset, where
//! each value is an integer tuple: degrees as is, DN mean and variance and
//! ARI as reduced fractions, squared SCAN as a reduced fraction and EBC
//! rounded to 12 decimal places (scaled by 1e12).
struct TopoFingerprint {
  FingerprintMode mode = FingerprintMode::Exact;
  std::vector<std::int64_t> values;
  // Start of each of the eight spans in `values`.
  std::vector<std::size_t> span_offsets;

  //! Values of span k (0..7) without its length prefix.
  std::vector<std::int64_t> span(std::size_t k) const;

  friend bool operator==(const TopoFingerprint& a, const TopoFingerprint& b) {
    return a.mode == b.mode && a.values == b.values;
  }
};

//! `n_bins` applies to histogram mode only; the default is the graph's size.
TopoFingerprint topo_fingerprint(const MolecularGraph& g, FingerprintMode mode,
                                 std::optional<int> n_bins = std::nullopt);

struct IndistinguishableReport {
  FingerprintMode mode = FingerprintMode::Exact;
  std::size_t graphs = 0;
  std::uint64_t total_pairs = 0;
  std::uint64_t indistinguishable_pairs = 0;
  // Size of each class of equal fingerprints -> number of such classes.
  std::map<std::size_t, std::size_t> class_sizes;

  std::string to_json() const;
};

//! Number of unordered pairs with equal fingerprints, found by hashing and
//! verified by full comparison inside each bucket.
IndistinguishableReport count_indistinguishable(const GraphCollection& gs, FingerprintMode mode,
                                                std::optional<int> n_bins = std::nullopt,
                                                int workers = 0);

//! Stable 1-WL coloring.
struct WLColoring {
  std::vector<int> colors;  // per node, canonical ids 0..k-1
  int rounds = 0;           // refinement rounds until the partition stopped splitting
  std::vector<int> color_multiset() const;
};

//! Starts from a uniform coloring and refines with (color, sorted neighbor
//! colors) signatures until no class splits or max_rounds (default |V|) pass.
//! Color ids are ranks of signatures, so they do not depend on node order.
WLColoring wl1_refine(const MolecularGraph& g, std::optional<int> max_rounds = std::nullopt);

//! True when 1-WL tells the graphs apart: sizes differ, or the stable color
//! multisets of the two halves of their disjoint union differ.
bool wl1_distinguishes(const MolecularGraph& a, const MolecularGraph& b);

//! Disjoint union with b's nodes shifted after a's.
MolecularGraph disjoint_union(const MolecularGraph& a, const MolecularGraph& b);

}  // namespace moltop
