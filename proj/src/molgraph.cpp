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

#include "moltop/molgraph.hpp"

#include <algorithm>
#include <string>

#include "moltop/error.hpp"

namespace moltop {

std::string_view to_string(BondType t) noexcept {
  switch (t) {
    case BondType::Single:
      return "single";
    case BondType::Double:
      return "double";
    case BondType::Triple:
      return "triple";
    case BondType::Aromatic:
      return "aromatic";
    case BondType::Misc:
      return "misc";
  }
  return "misc";
}

MolecularGraph MolecularGraph::build(int node_count, std::vector<int> atomic_numbers,
                                     std::vector<Edge> edges) {
  if (node_count < 0) {
    throw GraphError("negative node count " + std::to_string(node_count));
  }
  if (static_cast<int>(atomic_numbers.size()) != node_count) {
    throw GraphError("atomic number count " + std::to_string(atomic_numbers.size()) +
                     " does not match node count " + std::to_string(node_count));
  }
  for (int i = 0; i < node_count; ++i) {
    if (atomic_numbers[i] < 0 || atomic_numbers[i] > kMaxAtomicNumber) {
      throw GraphError("atomic number " + std::to_string(atomic_numbers[i]) + " of node " +
                       std::to_string(i) + " outside [0, 118]");
    }
  }
  for (std::size_t k = 0; k < edges.size(); ++k) {
    Edge& e = edges[k];
    if (e.u < 0 || e.u >= node_count || e.v < 0 || e.v >= node_count) {
      throw GraphError("edge " + std::to_string(k) + " (" + std::to_string(e.u) + ", " +
                       std::to_string(e.v) + ") has an index outside [0, " +
                       std::to_string(node_count) + ")");
    }
    if (e.u == e.v) {
      throw GraphError("edge " + std::to_string(k) + " is a self-loop on node " +
                       std::to_string(e.u));
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (std::size_t k = 1; k < edges.size(); ++k) {
    if (edges[k].u == edges[k - 1].u && edges[k].v == edges[k - 1].v) {
      throw GraphError("duplicate edge (" + std::to_string(edges[k].u) + ", " +
                       std::to_string(edges[k].v) + ")");
    }
  }

  MolecularGraph g;
  g.atomic_numbers_ = std::move(atomic_numbers);
  g.edges_ = std::move(edges);

  std::vector<int> deg(node_count, 0);
  for (const Edge& e : g.edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  g.offsets_.assign(node_count + 1, 0);
  for (int i = 0; i < node_count; ++i) g.offsets_[i + 1] = g.offsets_[i] + deg[i];
  g.adj_.resize(g.offsets_[node_count]);
  std::vector<int> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const Edge& e : g.edges_) {
    g.adj_[fill[e.u]++] = e.v;
    g.adj_[fill[e.v]++] = e.u;
  }
  for (int i = 0; i < node_count; ++i) {
    std::sort(g.adj_.begin() + g.offsets_[i], g.adj_.begin() + g.offsets_[i + 1]);
  }
  return g;
}

std::span<const int> MolecularGraph::neighbors(int v) const {
  if (v < 0 || v >= node_count()) {
    throw GraphError("node index " + std::to_string(v) + " out of range");
  }
  return neighbors_unchecked(v);
}

int MolecularGraph::degree(int v) const {
  if (v < 0 || v >= node_count()) {
    throw GraphError("node index " + std::to_string(v) + " out of range");
  }
  return degree_unchecked(v);
}

bool MolecularGraph::has_edge(int u, int v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

MolecularGraph MolecularGraph::permuted(std::span<const int> perm) const {
  const int n = node_count();
  if (static_cast<int>(perm.size()) != n) {
    throw GraphError("permutation length does not match node count");
  }
  std::vector<int> inverse(n, -1);
  for (int i = 0; i < n; ++i) {
    if (perm[i] < 0 || perm[i] >= n || inverse[perm[i]] != -1) {
      throw GraphError("invalid permutation");
    }
    inverse[perm[i]] = i;
  }
  std::vector<int> atoms(n);
  for (int i = 0; i < n; ++i) atoms[i] = atomic_numbers_[perm[i]];
  std::vector<Edge> edges;
  edges.reserve(edges_.size());
  for (const Edge& e : edges_) edges.push_back({inverse[e.u], inverse[e.v], e.type});
  return build(n, std::move(atoms), std::move(edges));
}

}  // namespace moltop
