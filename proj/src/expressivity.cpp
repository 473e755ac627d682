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

#include "moltop/expressivity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "moltop/descriptors.hpp"
#include "moltop/error.hpp"
#include "moltop/featurizer.hpp"
#include "moltop/parallel.hpp"

namespace moltop {
namespace {

using Tuple = std::array<std::int64_t, 2>;

Tuple fraction(std::int64_t num, std::int64_t den) {
  if (den == 0) return {0, 1};
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  return {num / g, den / g};
}

void append_span(TopoFingerprint& fp, std::vector<Tuple> items, int arity) {
  std::sort(items.begin(), items.end());
  fp.span_offsets.push_back(fp.values.size());
  fp.values.push_back(static_cast<std::int64_t>(items.size()));
  for (const Tuple& t : items) {
    for (int k = 0; k < arity; ++k) fp.values.push_back(t[k]);
  }
}

TopoFingerprint exact_fingerprint(const MolecularGraph& g) {
  TopoFingerprint fp;
  fp.mode = FingerprintMode::Exact;
  const int n = g.node_count();
  std::vector<Tuple> deg, lo, hi, mean, var;
  for (int v = 0; v < n; ++v) {
    const std::int64_t k = g.degree_unchecked(v);
    std::int64_t mn = 0, mx = 0, sum = 0, sq = 0;
    bool first = true;
    for (int u : g.neighbors_unchecked(v)) {
      const std::int64_t d = g.degree_unchecked(u);
      mn = first ? d : std::min(mn, d);
      mx = first ? d : std::max(mx, d);
      first = false;
      sum += d;
      sq += d * d;
    }
    deg.push_back({k, 0});
    lo.push_back({mn, 0});
    hi.push_back({mx, 0});
    mean.push_back(k == 0 ? Tuple{0, 1} : fraction(sum, k));
    var.push_back(k == 0 ? Tuple{0, 1} : fraction(k * sq - sum * sum, k * k));
  }
  append_span(fp, std::move(deg), 1);
  append_span(fp, std::move(lo), 1);
  append_span(fp, std::move(hi), 1);
  append_span(fp, std::move(mean), 2);
  append_span(fp, std::move(var), 2);

  std::vector<Tuple> ebc, ari, scan;
  for (double x : edge_betweenness(g)) ebc.push_back({std::llround(snap_betweenness(x) * 1e12), 0});
  const auto overlaps = edge_overlaps(g);
  const auto edges = g.edges();
  for (std::size_t e = 0; e < overlaps.size(); ++e) {
    const auto& o = overlaps[e];
    const std::int64_t a = o.common, b = o.only_u, c = o.only_v, d = o.neither;
    ari.push_back(fraction(2 * (a * d - b * c), (a + b) * (b + d) + (a + c) * (c + d)));
    const std::int64_t du = g.degree_unchecked(edges[e].u) + 1;
    const std::int64_t dv = g.degree_unchecked(edges[e].v) + 1;
    scan.push_back(fraction((a + 1) * (a + 1), du * dv));
  }
  append_span(fp, std::move(ebc), 1);
  append_span(fp, std::move(ari), 2);
  append_span(fp, std::move(scan), 2);
  return fp;
}

TopoFingerprint histogram_fingerprint(const MolecularGraph& g, int bins) {
  TopoFingerprint fp;
  fp.mode = FingerprintMode::Histogram;
  const double n = g.node_count();
  const std::array<HistogramSpec, 8> specs = {
      HistogramSpec{BinMode::Integer, bins, 0.0, bins - 1.0},
      HistogramSpec{BinMode::Integer, bins, 0.0, bins - 1.0},
      HistogramSpec{BinMode::Integer, bins, 0.0, bins - 1.0},
      HistogramSpec{BinMode::Uniform, bins, 0.0, std::max(1.0, n - 1.0)},
      HistogramSpec{BinMode::Uniform, bins, 0.0, std::max(1.0, (n - 1.0) / 2.0)},
      HistogramSpec{BinMode::Uniform, bins, 0.0, 1.0},
      HistogramSpec{BinMode::Uniform, bins, -1.0, 1.0},
      HistogramSpec{BinMode::Uniform, bins, 0.0, 1.0},
  };
  fp.values.assign(8 * static_cast<std::size_t>(bins), 0);
  for (std::size_t k = 0; k < 8; ++k) fp.span_offsets.push_back(k * bins);
  auto add = [&](std::size_t span, double x) { ++fp.values[span * bins + specs[span].bin_of(x)]; };
  for (const auto& s : degree_profile(g)) {
    add(0, s.degree);
    add(1, s.dn_min);
    add(2, s.dn_max);
    add(3, s.dn_mean);
    add(4, s.dn_std);
  }
  const EdgeScores es = edge_scores(g);
  for (double x : es.ebc) add(5, snap_betweenness(x));
  for (double x : es.ari) add(6, x);
  for (double x : es.scan) add(7, x);
  return fp;
}

std::uint64_t hash_values(const std::vector<std::int64_t>& v) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::int64_t x : v) {
    auto u = static_cast<std::uint64_t>(x);
    for (int b = 0; b < 8; ++b) {
      h ^= (u >> (8 * b)) & 0xFF;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

}  // namespace

std::string_view to_string(FingerprintMode m) noexcept {
  return m == FingerprintMode::Exact ? "exact" : "histogram";
}

FingerprintMode parse_fingerprint_mode(std::string_view name) {
  if (name == "exact") return FingerprintMode::Exact;
  if (name == "histogram") return FingerprintMode::Histogram;
  throw DataError("unknown fingerprint mode '" + std::string(name) + "' (expected histogram or exact)");
}

std::vector<std::int64_t> TopoFingerprint::span(std::size_t k) const {
  if (k >= span_offsets.size()) throw DataError("fingerprint span index out of range");
  std::size_t begin = span_offsets[k];
  const std::size_t end = k + 1 < span_offsets.size() ? span_offsets[k + 1] : values.size();
  if (mode == FingerprintMode::Exact) ++begin;  // skip the length prefix
  return {values.begin() + begin, values.begin() + end};
}

TopoFingerprint topo_fingerprint(const MolecularGraph& g, FingerprintMode mode,
                                 std::optional<int> n_bins) {
  if (mode == FingerprintMode::Exact) return exact_fingerprint(g);
  const int bins = n_bins ? *n_bins : std::max(1, g.node_count());
  if (bins < 1) throw DataError("bin count must be positive");
  return histogram_fingerprint(g, bins);
}

std::string IndistinguishableReport::to_json() const {
  nlohmann::json j;
  j["format"] = "moltop-expressivity-report";
  j["version"] = 1;
  j["mode"] = std::string(to_string(mode));
  j["graphs"] = graphs;
  j["total_pairs"] = total_pairs;
  j["indistinguishable_pairs"] = indistinguishable_pairs;
  nlohmann::json sizes = nlohmann::json::array();
  for (const auto& [size, count] : class_sizes) sizes.push_back({{"size", size}, {"classes", count}});
  j["class_sizes"] = sizes;
  return j.dump(2) + "\n";
}

IndistinguishableReport count_indistinguishable(const GraphCollection& gs, FingerprintMode mode,
                                                std::optional<int> n_bins, int workers) {
  std::vector<TopoFingerprint> fps(gs.size());
  std::vector<std::uint64_t> hashes(gs.size());
  parallel_for(gs.size(), workers, [&](std::size_t i) {
    fps[i] = topo_fingerprint(gs[i], mode, n_bins);
    hashes[i] = hash_values(fps[i].values);
  });

  // bucket hash -> classes (representative index, member count)
  std::unordered_map<std::uint64_t, std::vector<std::pair<std::size_t, std::size_t>>> buckets;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    auto& classes = buckets[hashes[i]];
    bool placed = false;
    for (auto& [rep, count] : classes) {
      if (fps[rep].values == fps[i].values) {
        ++count;
        placed = true;
        break;
      }
    }
    if (!placed) classes.push_back({i, 1});
  }

  IndistinguishableReport r;
  r.mode = mode;
  r.graphs = gs.size();
  r.total_pairs = gs.size() < 2 ? 0 : std::uint64_t(gs.size()) * (gs.size() - 1) / 2;
  for (const auto& [h, classes] : buckets) {
    for (const auto& [rep, k] : classes) {
      r.indistinguishable_pairs += std::uint64_t(k) * (k - 1) / 2;
      ++r.class_sizes[k];
    }
  }
  return r;
}

std::vector<int> WLColoring::color_multiset() const {
  std::vector<int> out = colors;
  std::sort(out.begin(), out.end());
  return out;
}

WLColoring wl1_refine(const MolecularGraph& g, std::optional<int> max_rounds) {
  const int n = g.node_count();
  const int limit = max_rounds ? *max_rounds : std::max(1, n);
  if (limit < 1) throw DataError("max_rounds must be at least 1");
  WLColoring c;
  c.colors.assign(n, 0);
  int classes = n > 0 ? 1 : 0;
  std::vector<std::vector<int>> sig(n);
  for (int round = 0; round < limit; ++round) {
    for (int v = 0; v < n; ++v) {
      sig[v].clear();
      for (int u : g.neighbors_unchecked(v)) sig[v].push_back(c.colors[u]);
      std::sort(sig[v].begin(), sig[v].end());
      sig[v].insert(sig[v].begin(), c.colors[v]);
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return sig[a] < sig[b]; });
    std::vector<int> next(n);
    int id = -1;
    for (int k = 0; k < n; ++k) {
      if (k == 0 || sig[order[k]] != sig[order[k - 1]]) ++id;
      next[order[k]] = id;
    }
    const int next_classes = id + 1;
    c.colors = std::move(next);
    if (next_classes == classes) break;  // no class split: stable
    classes = next_classes;
    c.rounds = round + 1;
  }
  return c;
}

MolecularGraph disjoint_union(const MolecularGraph& a, const MolecularGraph& b) {
  const int na = a.node_count();
  std::vector<int> atoms(a.atomic_numbers().begin(), a.atomic_numbers().end());
  atoms.insert(atoms.end(), b.atomic_numbers().begin(), b.atomic_numbers().end());
  std::vector<Edge> edges(a.edges().begin(), a.edges().end());
  for (const Edge& e : b.edges()) edges.push_back({e.u + na, e.v + na, e.type});
  return MolecularGraph::build(na + b.node_count(), std::move(atoms), std::move(edges));
}

bool wl1_distinguishes(const MolecularGraph& a, const MolecularGraph& b) {
  if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return true;
  const WLColoring c = wl1_refine(disjoint_union(a, b));
  const int na = a.node_count();
  std::vector<int> ca(c.colors.begin(), c.colors.begin() + na);
  std::vector<int> cb(c.colors.begin() + na, c.colors.end());
  std::sort(ca.begin(), ca.end());
  std::sort(cb.begin(), cb.end());
  return ca != cb;
}

}  // namespace moltop
