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

#include "moltop/descriptors.hpp"

#include <algorithm>
#include <cmath>

namespace moltop {
namespace {

// Edge id for each adjacency slot, in the same order as neighbors_unchecked().
std::vector<std::vector<int>> slot_edge_ids(const MolecularGraph& g) {
  const int n = g.node_count();
  std::vector<std::vector<int>> ids(n);
  for (int v = 0; v < n; ++v) ids[v].reserve(g.degree_unchecked(v));
  // Edges are sorted by (u, v) and adjacency lists ascending, so a single
  // pass over the edge list appends ids in neighbor order for the lower
  // endpoint; the upper endpoint needs a sort afterwards.
  std::vector<std::vector<std::pair<int, int>>> tmp(n);
  const auto edges = g.edges();
  for (int k = 0; k < static_cast<int>(edges.size()); ++k) {
    tmp[edges[k].u].push_back({edges[k].v, k});
    tmp[edges[k].v].push_back({edges[k].u, k});
  }
  for (int v = 0; v < n; ++v) {
    std::sort(tmp[v].begin(), tmp[v].end());
    for (auto [w, k] : tmp[v]) ids[v].push_back(k);
  }
  return ids;
}

long long count_common(std::span<const int> a, std::span<const int> b) {
  long long c = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++c;
      ++i;
      ++j;
    }
  }
  return c;
}

}  // namespace

NodeDegreeProfile degree_profile(const MolecularGraph& g) {
  const int n = g.node_count();
  NodeDegreeProfile out(n);
  for (int v = 0; v < n; ++v) {
    NodeDegreeStats& s = out[v];
    s.degree = g.degree_unchecked(v);
    if (s.degree == 0) continue;
    int lo = 0;
    int hi = 0;
    long long sum = 0;
    long long sum_sq = 0;
    bool first = true;
    for (int u : g.neighbors_unchecked(v)) {
      const int d = g.degree_unchecked(u);
      lo = first ? d : std::min(lo, d);
      hi = first ? d : std::max(hi, d);
      first = false;
      sum += d;
      sum_sq += static_cast<long long>(d) * d;
    }
    const double k = s.degree;
    s.dn_min = lo;
    s.dn_max = hi;
    s.dn_mean = static_cast<double>(sum) / k;
    // k * sum_sq - sum^2 is exact in integers; the variance is that over k^2.
    const long long num = static_cast<long long>(s.degree) * sum_sq - sum * sum;
    s.dn_std = num <= 0 ? 0.0 : std::sqrt(static_cast<double>(num)) / k;
  }
  return out;
}

std::vector<double> edge_betweenness(const MolecularGraph& g) {
  const int n = g.node_count();
  const int m = g.edge_count();
  std::vector<double> ebc(m, 0.0);
  if (n < 2 || m == 0) return ebc;

  const auto ids = slot_edge_ids(g);
  std::vector<int> dist(n);
  std::vector<double> sigma(n);
  std::vector<double> delta(n);
  std::vector<int> order;
  order.reserve(n);

  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    order.clear();
    dist[s] = 0;
    sigma[s] = 1.0;
    order.push_back(s);
    for (std::size_t head = 0; head < order.size(); ++head) {
      const int v = order[head];
      for (int w : g.neighbors_unchecked(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          order.push_back(w);
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int w = *it;
      const auto nb = g.neighbors_unchecked(w);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        const int v = nb[k];
        if (dist[v] != dist[w] - 1) continue;
        const double c = sigma[v] / sigma[w] * (1.0 + delta[w]);
        ebc[ids[w][k]] += c;
        delta[v] += c;
      }
    }
  }
  // Every unordered pair was visited from both ends.
  const double scale = 1.0 / (static_cast<double>(n) * (n - 1));
  for (double& x : ebc) x *= scale;
  return ebc;
}

std::vector<EdgeOverlap> edge_overlaps(const MolecularGraph& g) {
  const long long n = g.node_count();
  std::vector<EdgeOverlap> out;
  out.reserve(g.edge_count());
  for (const Edge& e : g.edges()) {
    EdgeOverlap o;
    o.common = count_common(g.neighbors_unchecked(e.u), g.neighbors_unchecked(e.v));
    o.only_u = g.degree_unchecked(e.u) - 1 - o.common;
    o.only_v = g.degree_unchecked(e.v) - 1 - o.common;
    o.neither = n - 2 - o.common - o.only_u - o.only_v;
    out.push_back(o);
  }
  return out;
}

std::vector<double> adjusted_rand_index(const MolecularGraph& g) {
  std::vector<double> out;
  out.reserve(g.edge_count());
  for (const EdgeOverlap& o : edge_overlaps(g)) {
    const long long a = o.common, b = o.only_u, c = o.only_v, d = o.neither;
    const long long den = (a + b) * (b + d) + (a + c) * (c + d);
    out.push_back(den == 0 ? 0.0 : 2.0 * static_cast<double>(a * d - b * c) / static_cast<double>(den));
  }
  return out;
}

std::vector<double> scan_scores(const MolecularGraph& g) {
  std::vector<double> out;
  out.reserve(g.edge_count());
  for (const Edge& e : g.edges()) {
    const long long common = count_common(g.neighbors_unchecked(e.u), g.neighbors_unchecked(e.v));
    const double du = g.degree_unchecked(e.u) + 1.0;
    const double dv = g.degree_unchecked(e.v) + 1.0;
    out.push_back((static_cast<double>(common) + 1.0) / std::sqrt(du * dv));
  }
  return out;
}

EdgeScores edge_scores(const MolecularGraph& g) {
  return {edge_betweenness(g), adjusted_rand_index(g), scan_scores(g)};
}

}  // namespace moltop
