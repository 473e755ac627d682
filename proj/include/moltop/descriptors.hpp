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

#include <cmath>
#include <vector>

#include "moltop/molgraph.hpp"

namespace moltop {

//! Degree statistics of one node over DN(v), the multiset of its neighbors'
//! degrees. All DN statistics are 0 for isolated nodes; std is the
//! population standard deviation.
struct NodeDegreeStats {
  int degree = 0;
  int dn_min = 0;
  int dn_max = 0;
  double dn_mean = 0.0;
  double dn_std = 0.0;
};

using NodeDegreeProfile = std::vector<NodeDegreeStats>;

//! Per-edge scores, indexed like MolecularGraph::edges().
struct EdgeScores {
  std::vector<double> ebc;
  std::vector<double> ari;
  std::vector<double> scan;
};

NodeDegreeProfile degree_profile(const MolecularGraph& g);

//! Edge betweenness centrality, Brandes accumulation over BFS shortest paths,
//! scaled by 2 / (|V| (|V| - 1)) with |V| of the whole graph. O(|V||E|).
std::vector<double> edge_betweenness(const MolecularGraph& g);

//! Betweenness rounded to a 1e-12 grid. Summation order follows node labels,
//! so raw values of isomorphic graphs can differ in the last bits; binning
//! the rounded value keeps histograms label-independent.
inline double snap_betweenness(double x) { return std::round(x * 1e12) / 1e12; }

//! Adjusted Rand index of the endpoint neighborhoods of each edge {u, v}.
//! Counts exclude u and v themselves; a 0/0 ratio yields 0.
std::vector<double> adjusted_rand_index(const MolecularGraph& g);

//! SCAN structural similarity (|N(u) ∩ N(v)| + 1) / sqrt((deg u + 1)(deg v + 1)).
std::vector<double> scan_scores(const MolecularGraph& g);

//! Raw ARI / SCAN ingredients for one edge, shared with exact fingerprints.
struct EdgeOverlap {
  long long common = 0;     // a: |N(u) ∩ N(v) \ {u, v}|
  long long only_u = 0;     // b
  long long only_v = 0;     // c
  long long neither = 0;    // d
};

std::vector<EdgeOverlap> edge_overlaps(const MolecularGraph& g);

EdgeScores edge_scores(const MolecularGraph& g);

}  // namespace moltop
