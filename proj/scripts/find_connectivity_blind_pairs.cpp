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

// Reads graph6 lines on stdin (e.g. from `geng -q 8`) and prints the first
// pairs where a disconnected and a connected graph share a topological
// fingerprint. Build against the moltop library:
//
//   g++ -std=c++20 -O2 -Iinclude scripts/find_connectivity_blind_pairs.cpp \
//       build/src/libmoltop.a -lz -pthread -o /tmp/blind
//   geng -q 8 | /tmp/blind exact
//
// Graphs of different edge counts never collide, so large orders can be
// searched one edge count at a time: geng -q 10 22:22 | /tmp/blind exact

#include <iostream>
#include <cstdint>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "moltop/datasets.hpp"
#include "moltop/expressivity.hpp"

namespace {

bool connected(const moltop::MolecularGraph& g) {
  if (g.node_count() == 0) return true;
  std::vector<bool> seen(g.node_count(), false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  int count = 1;
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int w : g.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        q.push(w);
      }
    }
  }
  return count == g.node_count();
}

std::uint64_t fnv(const std::vector<std::int64_t>& v) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::int64_t x : v) {
    h ^= static_cast<std::uint64_t>(x);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

int main(int argc, char** argv) {
  const auto mode = moltop::parse_fingerprint_mode(argc > 1 ? argv[1] : "exact");
  const int limit = argc > 2 ? std::stoi(argv[2]) : 5;
  // fingerprint hash -> (first connected line, first disconnected line);
  // candidate pairs are re-checked on the full fingerprints
  std::unordered_map<std::uint64_t, std::pair<std::string, std::string>> seen;
  int found = 0;
  std::string line;
  while (std::getline(std::cin, line) && found < limit) {
    const auto g = moltop::parse_graph6(line);
    auto& slot = seen[fnv(moltop::topo_fingerprint(g, mode).values)];
    const bool c = connected(g);
    std::string& mine = c ? slot.first : slot.second;
    const std::string& other = c ? slot.second : slot.first;
    if (mine.empty()) {
      mine = line;
      if (!other.empty() && moltop::topo_fingerprint(moltop::parse_graph6(other), mode) ==
                                moltop::topo_fingerprint(g, mode)) {
        std::cout << (c ? other : line) << ' ' << (c ? line : other) << '\n';
        ++found;
      }
    }
  }
  return 0;
}
