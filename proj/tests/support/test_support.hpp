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

// Independent reference implementations used as test oracles. Nothing here
// shares code with the library beyond the graph container.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "moltop/molgraph.hpp"

namespace moltop::testing {

inline std::filesystem::path source_dir() { return MOLTOP_SOURCE_DIR; }
inline std::filesystem::path data_path(const std::string& rel) { return source_dir() / "data" / rel; }
inline std::filesystem::path test_data_path(const std::string& rel) {
  return source_dir() / "tests" / "data" / rel;
}

inline MolecularGraph make_graph(int n, const std::vector<std::pair<int, int>>& edges,
                                 BondType type = BondType::Single) {
  std::vector<Edge> es;
  for (auto [u, v] : edges) es.push_back({u, v, type});
  return MolecularGraph::build(n, std::vector<int>(n, 6), std::move(es));
}

inline MolecularGraph path_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return make_graph(n, e);
}

inline MolecularGraph cycle_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
  return make_graph(n, e);
}

inline MolecularGraph complete_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.push_back({i, j});
  return make_graph(n, e);
}

inline MolecularGraph random_graph(std::mt19937_64& rng, int n, double p) {
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) e.push_back({i, j});
  return make_graph(n, e);
}

inline MolecularGraph random_tree(std::mt19937_64& rng, int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> parent(0, i - 1);
    e.push_back({parent(rng), i});
  }
  return make_graph(n, e);
}

inline std::vector<int> random_permutation(std::mt19937_64& rng, int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

// Graph6 encoder for n <= 62.
inline std::string to_graph6(const MolecularGraph& g) {
  const int n = g.node_count();
  std::string out(1, static_cast<char>(63 + n));
  int acc = 0;
  int bits = 0;
  for (int v = 1; v < n; ++v) {
    for (int u = 0; u < v; ++u) {
      acc = (acc << 1) | (g.has_edge(u, v) ? 1 : 0);
      if (++bits == 6) {
        out += static_cast<char>(63 + acc);
        acc = 0;
        bits = 0;
      }
    }
  }
  if (bits > 0) out += static_cast<char>(63 + (acc << (6 - bits)));
  return out;
}

inline std::set<int> neighbor_set(const MolecularGraph& g, int v) {
  auto nb = g.neighbors(v);
  return {nb.begin(), nb.end()};
}

// All-pairs BFS distances; -1 for unreachable.
inline std::vector<std::vector<int>> distances(const MolecularGraph& g) {
  const int n = g.node_count();
  std::vector<std::vector<int>> d(n, std::vector<int>(n, -1));
  for (int s = 0; s < n; ++s) {
    std::queue<int> q;
    q.push(s);
    d[s][s] = 0;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int w : g.neighbors(v)) {
        if (d[s][w] < 0) {
          d[s][w] = d[s][v] + 1;
          q.push(w);
        }
      }
    }
  }
  return d;
}

// Edge betweenness by listing every shortest path of every unordered pair.
inline std::vector<double> oracle_ebc(const MolecularGraph& g) {
  const int n = g.node_count();
  std::map<std::pair<int, int>, std::size_t> id;
  for (std::size_t k = 0; k < g.edges().size(); ++k) id[{g.edges()[k].u, g.edges()[k].v}] = k;
  std::vector<double> ebc(g.edge_count(), 0.0);
  if (n < 2) return ebc;
  const auto d = distances(g);
  for (int s = 0; s < n; ++s) {
    for (int t = s + 1; t < n; ++t) {
      if (d[s][t] < 0) continue;
      std::vector<std::vector<int>> paths;
      std::vector<int> cur{s};
      std::function<void(int)> walk = [&](int v) {
        if (v == t) {
          paths.push_back(cur);
          return;
        }
        for (int w : g.neighbors(v)) {
          if (d[s][w] == d[s][v] + 1 && d[w][t] == d[v][t] - 1) {
            cur.push_back(w);
            walk(w);
            cur.pop_back();
          }
        }
      };
      walk(s);
      std::vector<double> hits(g.edge_count(), 0.0);
      for (const auto& p : paths) {
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
          hits[id.at({std::min(p[i], p[i + 1]), std::max(p[i], p[i + 1])})] += 1.0;
        }
      }
      for (std::size_t k = 0; k < hits.size(); ++k) ebc[k] += hits[k] / static_cast<double>(paths.size());
    }
  }
  for (double& x : ebc) x *= 2.0 / (static_cast<double>(n) * (n - 1));
  return ebc;
}

struct OracleOverlap {
  long long a, b, c, d;
};

// Literal set arithmetic over N(u), N(v) and V for one edge.
inline OracleOverlap oracle_overlap(const MolecularGraph& g, int u, int v) {
  const auto nu = neighbor_set(g, u);
  const auto nv = neighbor_set(g, v);
  const std::set<int> ends{u, v};
  std::set<int> inter, only_u, only_v, uni, rest;
  std::set_intersection(nu.begin(), nu.end(), nv.begin(), nv.end(), std::inserter(inter, inter.end()));
  for (int x : ends) inter.erase(x);
  std::set_difference(nu.begin(), nu.end(), nv.begin(), nv.end(), std::inserter(only_u, only_u.end()));
  std::set_difference(nv.begin(), nv.end(), nu.begin(), nu.end(), std::inserter(only_v, only_v.end()));
  for (int x : ends) {
    only_u.erase(x);
    only_v.erase(x);
  }
  uni = ends;
  uni.insert(nu.begin(), nu.end());
  uni.insert(nv.begin(), nv.end());
  for (int x = 0; x < g.node_count(); ++x) {
    if (!uni.count(x)) rest.insert(x);
  }
  return {static_cast<long long>(inter.size()), static_cast<long long>(only_u.size()),
          static_cast<long long>(only_v.size()), static_cast<long long>(rest.size())};
}

inline std::vector<double> oracle_ari(const MolecularGraph& g) {
  std::vector<double> out;
  for (const Edge& e : g.edges()) {
    const auto [a, b, c, d] = oracle_overlap(g, e.u, e.v);
    const double num = 2.0 * static_cast<double>(a * d - b * c);
    const double den = static_cast<double>((a + b) * (b + d) + (a + c) * (c + d));
    out.push_back(den == 0.0 ? 0.0 : num / den);
  }
  return out;
}

inline std::vector<double> oracle_scan(const MolecularGraph& g) {
  std::vector<double> out;
  for (const Edge& e : g.edges()) {
    const auto nu = neighbor_set(g, e.u);
    const auto nv = neighbor_set(g, e.v);
    std::set<int> inter;
    std::set_intersection(nu.begin(), nu.end(), nv.begin(), nv.end(), std::inserter(inter, inter.end()));
    out.push_back((static_cast<double>(inter.size()) + 1.0) /
                  std::sqrt((static_cast<double>(nu.size()) + 1.0) * (static_cast<double>(nv.size()) + 1.0)));
  }
  return out;
}

// Area under ROC by counting every (positive, negative) pair.
inline std::optional<double> oracle_auroc(const std::vector<double>& s, const std::vector<double>& y) {
  double num = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (y[i] != 1.0) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j] != 0.0) continue;
      pairs += 1.0;
      if (s[i] > s[j]) num += 1.0;
      if (s[i] == s[j]) num += 0.5;
    }
  }
  if (pairs == 0.0) return std::nullopt;
  return num / pairs;
}

// Average precision from its definition: for each positive, the precision of
// the top-k list that ends at it (ties ordered by input position). Terms are
// added from the top of the ranking down.
inline std::optional<double> oracle_ap(const std::vector<double>& s, const std::vector<double>& y) {
  std::vector<std::pair<int, double>> terms;  // (list length, precision)
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (y[i] != 1.0) continue;
    int above = 0;
    int above_pos = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      const bool ahead = s[j] > s[i] || (s[j] == s[i] && j <= i);
      if (!ahead) continue;
      ++above;
      if (y[j] == 1.0) ++above_pos;
    }
    terms.push_back({above, static_cast<double>(above_pos) / above});
  }
  if (terms.empty()) return std::nullopt;
  std::sort(terms.begin(), terms.end());
  double total = 0.0;
  for (const auto& [k, p] : terms) total += p;
  return total / static_cast<double>(terms.size());
}

// Two-sided Wilcoxon signed-rank p by enumerating all 2^n sign vectors.
inline double oracle_wilcoxon(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) d.push_back(a[i] - b[i]);
  const std::size_t n = d.size();
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    double less = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(d[j]) < std::abs(d[i])) less += 1;
      if (std::abs(d[j]) == std::abs(d[i])) equal += 1;
    }
    rank[i] = less + (equal + 1) / 2.0;
  }
  double w_plus = 0, total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total += rank[i];
    if (d[i] > 0) w_plus += rank[i];
  }
  const double t_obs = std::min(w_plus, total - w_plus);
  std::uint64_t at_most = 0;
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    double w = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) w += rank[i];
    if (std::min(w, total - w) <= t_obs + 1e-9) ++at_most;
  }
  return std::min(1.0, static_cast<double>(at_most) / static_cast<double>(1ULL << n));
}

}  // namespace moltop::testing
