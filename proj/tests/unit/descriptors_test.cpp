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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "moltop/datasets.hpp"
#include "moltop/descriptors.hpp"
#include "test_support.hpp"

namespace moltop {
namespace {

constexpr double kTol = 1e-12;

void expect_all_near(const std::vector<double>& got, const std::vector<double>& want, const std::string& what) {
  ASSERT_EQ(got.size(), want.size()) << what;
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], kTol) << what << " edge " << i;
}

void expect_degree_profile(const MolecularGraph& g) {
  const auto prof = degree_profile(g);
  ASSERT_EQ(static_cast<int>(prof.size()), g.node_count());
  for (int v = 0; v < g.node_count(); ++v) {
    std::vector<double> dn;
    for (int u : g.neighbors(v)) dn.push_back(g.degree(u));
    EXPECT_EQ(prof[v].degree, static_cast<int>(dn.size()));
    if (dn.empty()) {
      EXPECT_EQ(prof[v].dn_min, 0);
      EXPECT_EQ(prof[v].dn_max, 0);
      EXPECT_EQ(prof[v].dn_mean, 0.0);
      EXPECT_EQ(prof[v].dn_std, 0.0);
      continue;
    }
    double mean = 0;
    for (double x : dn) mean += x;
    mean /= dn.size();
    double var = 0;
    for (double x : dn) var += (x - mean) * (x - mean);
    var /= dn.size();
    EXPECT_EQ(prof[v].dn_min, *std::min_element(dn.begin(), dn.end()));
    EXPECT_EQ(prof[v].dn_max, *std::max_element(dn.begin(), dn.end()));
    EXPECT_NEAR(prof[v].dn_mean, mean, kTol);
    EXPECT_NEAR(prof[v].dn_std, std::sqrt(var), kTol);
  }
}

void check_against_oracles(const MolecularGraph& g, const std::string& what) {
  expect_degree_profile(g);
  expect_all_near(edge_betweenness(g), testing::oracle_ebc(g), what + " ebc");
  expect_all_near(adjusted_rand_index(g), testing::oracle_ari(g), what + " ari");
  expect_all_near(scan_scores(g), testing::oracle_scan(g), what + " scan");
  const auto ov = edge_overlaps(g);
  for (std::size_t k = 0; k < ov.size(); ++k) {
    const auto o = testing::oracle_overlap(g, g.edges()[k].u, g.edges()[k].v);
    EXPECT_EQ(ov[k].common, o.a);
    EXPECT_EQ(ov[k].only_u, o.b);
    EXPECT_EQ(ov[k].only_v, o.c);
    EXPECT_EQ(ov[k].neither, o.d);
  }
}

TEST(Descriptors, AllGraphsUpToSevenNodes) {
  const auto atlas = load_graph6(testing::test_data_path("atlas_upto7.g6"));
  ASSERT_EQ(atlas.size(), 1252u);
  for (std::size_t i = 0; i < atlas.size(); ++i) {
    check_against_oracles(atlas[i], "atlas " + std::to_string(i));
    if (::testing::Test::HasFailure()) break;
  }
}

TEST(Descriptors, RandomGraphs) {
  std::mt19937_64 rng(20260417);
  std::uniform_int_distribution<int> size(2, 30);
  std::uniform_real_distribution<double> density(0.05, 0.5);
  for (int rep = 0; rep < 1000; ++rep) {
    check_against_oracles(testing::random_graph(rng, size(rng), density(rng)), "random " + std::to_string(rep));
    if (::testing::Test::HasFailure()) break;
  }
}

TEST(Descriptors, SmallGraphValues) {
  const auto p2 = testing::path_graph(2);
  const auto p3 = testing::path_graph(3);
  const auto k3 = testing::complete_graph(3);
  const auto c4 = testing::cycle_graph(4);

  EXPECT_EQ(edge_betweenness(p2), std::vector<double>{1.0});
  for (double x : edge_betweenness(p3)) EXPECT_NEAR(x, 2.0 / 3.0, kTol);
  for (double x : edge_betweenness(k3)) EXPECT_NEAR(x, 1.0 / 3.0, kTol);

  EXPECT_EQ(adjusted_rand_index(p2), std::vector<double>{0.0});
  for (double x : adjusted_rand_index(k3)) EXPECT_EQ(x, 0.0);
  for (double x : adjusted_rand_index(c4)) EXPECT_EQ(x, -1.0);

  EXPECT_EQ(scan_scores(p2), std::vector<double>{0.5});
  for (double x : scan_scores(k3)) EXPECT_NEAR(x, 2.0 / 3.0, kTol);
  for (double x : scan_scores(c4)) EXPECT_NEAR(x, 1.0 / 3.0, kTol);

  const auto centre = degree_profile(p3)[1];
  EXPECT_EQ(centre.degree, 2);
  EXPECT_EQ(centre.dn_min, 1);
  EXPECT_EQ(centre.dn_max, 1);
  EXPECT_EQ(centre.dn_mean, 1.0);
  EXPECT_EQ(centre.dn_std, 0.0);
}

TEST(Descriptors, TreeBetweennessSumsToMeanDistance) {
  // On a tree every pair has one path, so the EBC total equals the scaled
  // sum of pair distances.
  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 2 + rep % 40;
    const auto g = testing::random_tree(rng, n);
    const auto d = testing::distances(g);
    double dist_sum = 0;
    for (int s = 0; s < n; ++s)
      for (int t = s + 1; t < n; ++t) dist_sum += d[s][t];
    double ebc_sum = 0;
    for (double x : edge_betweenness(g)) ebc_sum += x;
    EXPECT_NEAR(ebc_sum, dist_sum * 2.0 / (double(n) * (n - 1)), 1e-9);
  }
}

TEST(Descriptors, PermutationInvariantMultisets) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 200; ++rep) {
    const auto g = testing::random_graph(rng, 15, 0.25);
    const auto perm = testing::random_permutation(rng, g.node_count());
    const auto p = g.permuted(perm);
    auto sorted = [](std::vector<double> v) {
      for (double& x : v) x = std::round(x * 1e10) / 1e10;
      std::sort(v.begin(), v.end());
      return v;
    };
    EXPECT_EQ(sorted(edge_betweenness(g)), sorted(edge_betweenness(p)));
    EXPECT_EQ(sorted(adjusted_rand_index(g)), sorted(adjusted_rand_index(p)));
    EXPECT_EQ(sorted(scan_scores(g)), sorted(scan_scores(p)));
    std::vector<double> sg, sp;
    for (const auto& s : degree_profile(g)) sg.push_back(s.dn_std);
    for (const auto& s : degree_profile(p)) sp.push_back(s.dn_std);
    EXPECT_EQ(sorted(sg), sorted(sp));
  }
}

TEST(Descriptors, ScoresStayInRange) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 300; ++rep) {
    const auto g = testing::random_graph(rng, 3 + rep % 25, 0.3);
    const auto es = edge_scores(g);
    for (double x : es.ebc) EXPECT_TRUE(x >= 0.0 && x <= 1.0);
    for (double x : es.ari) EXPECT_TRUE(x >= -1.0 - kTol && x <= 1.0 + kTol);
    for (double x : es.scan) EXPECT_TRUE(x > 0.0 && x <= 1.0 + kTol);
  }
}

TEST(Descriptors, EmptyAndIsolated) {
  const auto g = MolecularGraph::build(3, {6, 6, 6}, {});
  EXPECT_TRUE(edge_betweenness(g).empty());
  EXPECT_EQ(degree_profile(g).size(), 3u);
  EXPECT_TRUE(edge_scores(MolecularGraph::build(1, {2}, {})).ebc.empty());
}

}  // namespace
}  // namespace moltop
