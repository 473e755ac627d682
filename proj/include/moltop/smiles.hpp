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
#include <string_view>
#include <vector>

#include "moltop/molgraph.hpp"

namespace moltop {

enum class SmilesTokenKind {
  OrganicAtom,
  BracketAtom,
  Bond,
  RingClosure,
  BranchOpen,
  BranchClose,
  Dot,
};

//! One lexical unit of a SMILES string; [begin, end) is its byte span.
struct SmilesToken {
  SmilesTokenKind kind;
  std::size_t begin = 0;
  std::size_t end = 0;

  // Atoms.
  int atomic_number = 0;
  bool aromatic = false;
  int isotope = 0;  // 0 = unspecified
  int charge = 0;
  int hydrogens = 0;

  // Bonds: the literal symbol ('-', '=', '#', '$', ':', '/', '\\').
  char bond = 0;

  // Ring closures.
  int ring_number = 0;
};

//! Atomic number for an element symbol ("C", "Cl", ...), or -1 if unknown.
//! "*" maps to 0.
int atomic_number_of(std::string_view symbol) noexcept;

//! Splits a SMILES string into tokens. Throws ParseError on malformed atoms.
std::vector<SmilesToken> tokenize_smiles(std::string_view smiles);

//! Parses SMILES into a heavy-atom graph.
//!
//! Charges, isotopes, explicit hydrogen counts and stereo marks are read and
//! discarded. Explicit hydrogen atoms bonded to a single heavy atom are folded
//! away. Throws ParseError (with byte offset) on unbalanced branches, unmatched
//! ring closures, unknown elements, empty branches and dangling bonds.
MolecularGraph parse_smiles(std::string_view smiles);

}  // namespace moltop
