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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "moltop/labels.hpp"
#include "moltop/molgraph.hpp"

namespace moltop {

enum class Strictness { Strict, Lenient };

//! A row left out of a dataset in lenient mode.
struct SkippedRow {
  std::size_t row = 0;  // 0-based data row (header excluded)
  std::string smiles;
  std::string reason;
};

struct LabeledDataset {
  GraphCollection graphs;
  std::vector<std::string> smiles;
  LabelMatrix labels;
  std::vector<std::string> task_names;
  // Data row of the source file each entry came from; differs from the
  // position only when rows were skipped.
  std::vector<std::size_t> source_rows;
  // Data rows in the source file, loaded or not.
  std::size_t file_rows = 0;
  std::vector<SkippedRow> skipped;

  std::size_t size() const noexcept { return graphs.size(); }
};

//! Parses RFC 4180 CSV text into records. Quoted fields may contain commas,
//! doubled quotes and line breaks; CRLF and LF endings are both accepted.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

//! Loads a labeled molecule table. `task_columns` empty means every column
//! other than the SMILES column. Empty cells become missing labels; other
//! cells must read 0 or 1 (0.0 / 1.0 also accepted). Rows whose SMILES fail
//! to parse raise DataError naming the row (Strict) or are recorded in
//! `skipped` (Lenient).
LabeledDataset load_csv_dataset(const std::filesystem::path& path, std::string_view smiles_column,
                                const std::vector<std::string>& task_columns,
                                Strictness strictness = Strictness::Strict, int workers = 0);

//! Same, from CSV text already in memory.
LabeledDataset parse_csv_dataset(std::string_view text, std::string_view smiles_column,
                                 const std::vector<std::string>& task_columns,
                                 Strictness strictness = Strictness::Strict, int workers = 0);

//! Writes the dataset back as CSV: a "smiles" column, then one per task,
//! missing labels as empty cells.
void write_csv_dataset(std::ostream& out, const LabeledDataset& ds);

//! Writes the lenient-mode skip manifest as CSV (row, smiles, reason).
void write_skip_manifest(std::ostream& out, const std::vector<SkippedRow>& skipped);

//! Train/valid/test row indices.
struct SplitSpec {
  std::vector<std::size_t> train;
  std::vector<std::size_t> valid;
  std::vector<std::size_t> test;

  friend bool operator==(const SplitSpec&, const SplitSpec&) = default;
};

//! Reads train/valid/test index files from `dir`. For each part the first
//! existing name among <part>.csv, <part>.csv.gz, <part>.txt, <part>.txt.gz
//! is used; gzip content is detected automatically. One base-10 index per
//! line. Throws DataError on a missing file, a bad line or overlapping parts.
SplitSpec load_split(const std::filesystem::path& dir);

//! Parses one index file's content.
std::vector<std::size_t> parse_index_lines(std::string_view text, const std::string& source);

//! Maps file-row indices to dataset positions. Throws DataError naming the
//! index when it is >= ds.file_rows. Indices of skipped rows are dropped and
//! counted in *dropped when given.
SplitSpec bind_split(const SplitSpec& split, const LabeledDataset& ds, std::size_t* dropped = nullptr);

//! Decodes one graph6 line (optional ">>graph6<<" prefix). Nodes get atomic
//! number 0 and edges BondType::Misc. Throws FormatError on a byte outside
//! 63..126 or a bit vector of the wrong length.
MolecularGraph parse_graph6(std::string_view line);

//! Reads a graph6 file, one graph per non-empty line.
GraphCollection load_graph6(const std::filesystem::path& path);

//! Whole file as bytes, gunzipped when it starts with the gzip magic.
std::string read_file(const std::filesystem::path& path);

}  // namespace moltop
