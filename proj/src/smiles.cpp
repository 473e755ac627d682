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

#include "moltop/smiles.hpp"

#include <array>
#include <cctype>
#include <map>
#include <string>

#include "moltop/error.hpp"

namespace moltop {
namespace {

constexpr std::array<std::string_view, 119> kElements = {
    "*",  "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg", "Al", "Si",
    "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr", "Mn", "Fe", "Co", "Ni", "Cu",
    "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru",
    "Rh", "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr",
    "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W",
    "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac",
    "Th", "Pa", "U",  "Np", "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf",
    "Db", "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og"};

bool is_bond_char(char c) {
  return c == '-' || c == '=' || c == '#' || c == '$' || c == ':' || c == '/' || c == '\\';
}

int read_int(std::string_view s, std::size_t& i) {
  int v = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    v = v * 10 + (s[i] - '0');
    ++i;
  }
  return v;
}

// Aromatic symbols allowed inside brackets.
int aromatic_bracket_symbol(std::string_view s, std::size_t i, std::size_t& len) {
  static constexpr std::array<std::pair<std::string_view, int>, 9> kAromatic = {{
      {"se", 34}, {"as", 33}, {"te", 52}, {"b", 5}, {"c", 6}, {"n", 7}, {"o", 8}, {"p", 15},
      {"s", 16},
  }};
  for (const auto& [sym, z] : kAromatic) {
    if (s.substr(i, sym.size()) == sym) {
      len = sym.size();
      return z;
    }
  }
  return -1;
}

SmilesToken read_bracket_atom(std::string_view s, std::size_t start) {
  SmilesToken tok{SmilesTokenKind::BracketAtom};
  tok.begin = start;
  std::size_t i = start + 1;
  if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    tok.isotope = read_int(s, i);
  }
  if (i >= s.size()) throw ParseError("unterminated bracket atom", start);

  if (s[i] == '*') {
    tok.atomic_number = 0;
    ++i;
  } else if (std::isupper(static_cast<unsigned char>(s[i]))) {
    // Prefer the two-letter symbol when it exists ("Cl" over "C").
    int z = -1;
    if (i + 1 < s.size() && std::islower(static_cast<unsigned char>(s[i + 1]))) {
      z = atomic_number_of(s.substr(i, 2));
      if (z >= 0) i += 2;
    }
    if (z < 0) {
      z = atomic_number_of(s.substr(i, 1));
      if (z < 0) throw ParseError("unknown element symbol", i);
      i += 1;
    }
    tok.atomic_number = z;
  } else {
    std::size_t len = 0;
    const int z = aromatic_bracket_symbol(s, i, len);
    if (z < 0) throw ParseError("unknown element symbol", i);
    tok.atomic_number = z;
    tok.aromatic = true;
    i += len;
  }

  // Chirality: '@', '@@', '@TH1', '@OH12', ...
  while (i < s.size() && s[i] == '@') {
    ++i;
    for (std::string_view cls : {"TH", "AL", "SP", "TB", "OH"}) {
      if (s.substr(i, 2) == cls) {
        i += 2;
        read_int(s, i);
        break;
      }
    }
  }
  if (i < s.size() && s[i] == 'H') {
    ++i;
    tok.hydrogens = 1;
    if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) tok.hydrogens = read_int(s, i);
  }
  while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    const int sign = s[i] == '+' ? 1 : -1;
    ++i;
    if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      tok.charge += sign * read_int(s, i);
    } else {
      tok.charge += sign;
    }
  }
  if (i < s.size() && s[i] == ':') {
    ++i;
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) {
      throw ParseError("atom class without digits", i);
    }
    read_int(s, i);
  }
  if (i >= s.size() || s[i] != ']') throw ParseError("unterminated bracket atom", start);
  tok.end = i + 1;
  return tok;
}

}  // namespace

int atomic_number_of(std::string_view symbol) noexcept {
  for (std::size_t z = 0; z < kElements.size(); ++z) {
    if (kElements[z] == symbol) return static_cast<int>(z);
  }
  return -1;
}

std::vector<SmilesToken> tokenize_smiles(std::string_view s) {
  std::vector<SmilesToken> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    SmilesToken tok{SmilesTokenKind::OrganicAtom};
    tok.begin = i;
    if (c == '[') {
      tok = read_bracket_atom(s, i);
      i = tok.end;
      out.push_back(tok);
      continue;
    }
    if (c == '(') {
      tok.kind = SmilesTokenKind::BranchOpen;
      ++i;
    } else if (c == ')') {
      tok.kind = SmilesTokenKind::BranchClose;
      ++i;
    } else if (c == '.') {
      tok.kind = SmilesTokenKind::Dot;
      ++i;
    } else if (is_bond_char(c)) {
      tok.kind = SmilesTokenKind::Bond;
      tok.bond = c;
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      tok.kind = SmilesTokenKind::RingClosure;
      tok.ring_number = c - '0';
      ++i;
    } else if (c == '%') {
      tok.kind = SmilesTokenKind::RingClosure;
      ++i;
      if (i < s.size() && s[i] == '(') {
        ++i;
        const std::size_t digits = i;
        tok.ring_number = read_int(s, i);
        if (i == digits || i >= s.size() || s[i] != ')') {
          throw ParseError("malformed %(n) ring closure", tok.begin);
        }
        ++i;
      } else {
        if (i + 1 >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])) ||
            !std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
          throw ParseError("'%' ring closure needs two digits", tok.begin);
        }
        tok.ring_number = (s[i] - '0') * 10 + (s[i + 1] - '0');
        i += 2;
      }
    } else if (c == '*') {
      tok.atomic_number = 0;
      ++i;
    } else if (c == 'C' && i + 1 < s.size() && s[i + 1] == 'l') {
      tok.atomic_number = 17;
      i += 2;
    } else if (c == 'B' && i + 1 < s.size() && s[i + 1] == 'r') {
      tok.atomic_number = 35;
      i += 2;
    } else if (c == 'B' || c == 'C' || c == 'N' || c == 'O' || c == 'P' || c == 'S' ||
               c == 'F' || c == 'I') {
      tok.atomic_number = atomic_number_of(s.substr(i, 1));
      ++i;
    } else if (c == 'b' || c == 'c' || c == 'n' || c == 'o' || c == 'p' || c == 's') {
      tok.atomic_number = atomic_number_of(std::string(1, static_cast<char>(std::toupper(c))));
      tok.aromatic = true;
      ++i;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
    tok.end = i;
    out.push_back(tok);
  }
  return out;
}

namespace {

bool is_directional(char c) { return c == '/' || c == '\\'; }

struct RawAtom {
  int atomic_number;
  bool aromatic;
  int isotope;
  int charge;
};

struct RawBond {
  int u;
  int v;
  char symbol;  // 0 = implicit
  std::size_t offset;
};

struct OpenRing {
  int atom;
  char symbol;
  std::size_t offset;
};

// Marks bridges (edges on no cycle) with an iterative lowpoint DFS.
std::vector<bool> find_bridges(int n, const std::vector<RawBond>& bonds) {
  std::vector<std::vector<std::pair<int, int>>> adj(n);
  for (std::size_t k = 0; k < bonds.size(); ++k) {
    adj[bonds[k].u].push_back({bonds[k].v, static_cast<int>(k)});
    adj[bonds[k].v].push_back({bonds[k].u, static_cast<int>(k)});
  }
  std::vector<bool> bridge(bonds.size(), false);
  std::vector<int> disc(n, -1), low(n, 0);
  int timer = 0;
  struct Frame {
    int v;
    int parent_edge;
    std::size_t next;
  };
  for (int root = 0; root < n; ++root) {
    if (disc[root] != -1) continue;
    std::vector<Frame> stack{{root, -1, 0}};
    disc[root] = low[root] = timer++;
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next < adj[f.v].size()) {
        auto [w, eid] = adj[f.v][f.next++];
        if (eid == f.parent_edge) continue;
        if (disc[w] == -1) {
          disc[w] = low[w] = timer++;
          stack.push_back({w, eid, 0});
        } else {
          low[f.v] = std::min(low[f.v], disc[w]);
        }
      } else {
        const int v = f.v;
        const int pe = f.parent_edge;
        stack.pop_back();
        if (!stack.empty()) {
          const int p = stack.back().v;
          low[p] = std::min(low[p], low[v]);
          if (low[v] > disc[p]) bridge[pe] = true;
        }
      }
    }
  }
  return bridge;
}

BondType classify(char symbol, bool both_aromatic, bool on_ring) {
  switch (symbol) {
    case '-':
    case '/':
    case '\\':
      return BondType::Single;
    case '=':
      return BondType::Double;
    case '#':
      return BondType::Triple;
    case ':':
      return BondType::Aromatic;
    case 0:
      return both_aromatic && on_ring ? BondType::Aromatic : BondType::Single;
    default:
      return BondType::Misc;
  }
}

}  // namespace

MolecularGraph parse_smiles(std::string_view s) {
  if (s.empty()) throw ParseError("empty SMILES", 0);
  const std::vector<SmilesToken> tokens = tokenize_smiles(s);

  std::vector<RawAtom> atoms;
  std::vector<RawBond> bonds;
  std::vector<int> branch_stack;
  std::vector<std::size_t> branch_offsets;
  std::map<int, OpenRing> rings;

  int prev = -1;
  char pending = 0;
  std::size_t pending_offset = 0;
  bool branch_empty = false;

  auto add_bond = [&](int u, int v, char sym, std::size_t offset) {
    if (u == v) throw ParseError("ring closure bonds an atom to itself", offset);
    for (const RawBond& b : bonds) {
      if ((b.u == u && b.v == v) || (b.u == v && b.v == u)) {
        throw ParseError("duplicate bond", offset);
      }
    }
    bonds.push_back({u, v, sym, offset});
  };

  for (const SmilesToken& tok : tokens) {
    switch (tok.kind) {
      case SmilesTokenKind::OrganicAtom:
      case SmilesTokenKind::BracketAtom: {
        const int idx = static_cast<int>(atoms.size());
        atoms.push_back({tok.atomic_number, tok.aromatic, tok.isotope, tok.charge});
        if (prev >= 0) add_bond(prev, idx, pending, tok.begin);
        prev = idx;
        pending = 0;
        branch_empty = false;
        break;
      }
      case SmilesTokenKind::Bond:
        if (prev < 0) throw ParseError("bond without a preceding atom", tok.begin);
        if (is_directional(pending) && is_directional(tok.bond)) break;  // a doubled mark reads as one
        if (pending != 0) throw ParseError("consecutive bond symbols", tok.begin);
        pending = tok.bond;
        pending_offset = tok.begin;
        break;
      case SmilesTokenKind::RingClosure: {
        if (prev < 0) throw ParseError("ring closure without a preceding atom", tok.begin);
        auto it = rings.find(tok.ring_number);
        if (it == rings.end()) {
          rings[tok.ring_number] = {prev, pending, tok.begin};
        } else {
          const OpenRing open = it->second;
          rings.erase(it);
          char sym = pending;
          // Directional marks only carry stereo, so '/' against '\' is no conflict.
          auto kind = [](char c) { return c == '/' || c == '\\' ? '-' : c; };
          if (open.symbol != 0 && sym != 0 && kind(open.symbol) != kind(sym)) {
            throw ParseError("conflicting ring closure bond symbols", tok.begin);
          }
          if (sym == 0) sym = open.symbol;
          add_bond(open.atom, prev, sym, tok.begin);
        }
        pending = 0;
        break;
      }
      case SmilesTokenKind::BranchOpen:
        if (prev < 0) throw ParseError("branch without a preceding atom", tok.begin);
        if (pending != 0) throw ParseError("bond symbol before branch", pending_offset);
        branch_stack.push_back(prev);
        branch_offsets.push_back(tok.begin);
        branch_empty = true;
        break;
      case SmilesTokenKind::BranchClose:
        if (branch_stack.empty()) throw ParseError("unbalanced ')'", tok.begin);
        if (branch_empty) throw ParseError("empty branch", tok.begin);
        if (pending != 0) throw ParseError("dangling bond at end of branch", pending_offset);
        prev = branch_stack.back();
        branch_stack.pop_back();
        branch_offsets.pop_back();
        branch_empty = false;
        break;
      case SmilesTokenKind::Dot:
        if (!branch_stack.empty()) throw ParseError("'.' inside a branch", tok.begin);
        if (pending != 0) throw ParseError("dangling bond before '.'", pending_offset);
        if (prev < 0) throw ParseError("'.' without a preceding atom", tok.begin);
        prev = -1;
        break;
    }
  }
  if (!branch_stack.empty()) throw ParseError("unbalanced branch '('", branch_offsets.back());
  if (pending != 0) throw ParseError("dangling bond at end of input", pending_offset);
  if (!rings.empty()) {
    throw ParseError("unmatched ring closure " + std::to_string(rings.begin()->first),
                     rings.begin()->second.offset);
  }
  if (prev < 0) throw ParseError("SMILES ends with '.'", s.size());

  const int n = static_cast<int>(atoms.size());
  const std::vector<bool> bridge = find_bridges(n, bonds);

  // Fold plain hydrogens ([H] without isotope or charge, bonded to one heavy
  // atom), except one that alone fixes the geometry of a marked double bond.
  std::vector<int> degree(n, 0);
  for (const RawBond& b : bonds) {
    ++degree[b.u];
    ++degree[b.v];
  }
  auto marked_beyond = [&](int atom, int skip) {
    for (const RawBond& b : bonds) {
      if ((b.u == atom && b.v != skip) || (b.v == atom && b.u != skip)) {
        if (is_directional(b.symbol)) return true;
      }
    }
    return false;
  };
  auto defines_stereo = [&](const RawBond& hb, int heavy) {
    if (!is_directional(hb.symbol) || degree[heavy] != 2) return false;
    for (const RawBond& b : bonds) {
      if (&b == &hb || b.symbol != '=' || (b.u != heavy && b.v != heavy)) continue;
      return marked_beyond(b.u == heavy ? b.v : b.u, heavy);
    }
    return false;
  };
  std::vector<bool> drop(n, false);
  for (const RawBond& b : bonds) {
    for (auto [h, other] : {std::pair{b.u, b.v}, std::pair{b.v, b.u}}) {
      const RawAtom& a = atoms[h];
      if (a.atomic_number == 1 && a.isotope == 0 && a.charge == 0 && degree[h] == 1 &&
          atoms[other].atomic_number != 1 && !defines_stereo(b, other)) {
        drop[h] = true;
      }
    }
  }
  std::vector<int> remap(n, -1);
  std::vector<int> atomic_numbers;
  for (int i = 0; i < n; ++i) {
    if (drop[i]) continue;
    remap[i] = static_cast<int>(atomic_numbers.size());
    atomic_numbers.push_back(atoms[i].atomic_number);
  }
  std::vector<Edge> edges;
  edges.reserve(bonds.size());
  for (std::size_t k = 0; k < bonds.size(); ++k) {
    const RawBond& b = bonds[k];
    if (drop[b.u] || drop[b.v]) continue;
    const bool both_aromatic = atoms[b.u].aromatic && atoms[b.v].aromatic;
    edges.push_back({remap[b.u], remap[b.v], classify(b.symbol, both_aromatic, !bridge[k])});
  }
  const int count = static_cast<int>(atomic_numbers.size());
  return MolecularGraph::build(count, std::move(atomic_numbers), std::move(edges));
}

}  // namespace moltop
