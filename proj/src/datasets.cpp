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

#include "moltop/datasets.hpp"

#include <zlib.h>

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <ostream>
#include <unordered_map>

#include "moltop/error.hpp"
#include "moltop/parallel.hpp"
#include "moltop/smiles.hpp"

namespace moltop {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Returns false for a blank cell (missing label).
bool parse_label(std::string_view cell, double* value) {
  cell = trim(cell);
  if (cell.empty()) return false;
  const std::string s(cell);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end || (v != 0.0 && v != 1.0)) {
    throw DataError("non-binary label '" + s + "'");
  }
  *value = v;
  return true;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  gzFile f = gzopen(path.string().c_str(), "rb");
  if (!f) throw DataError("cannot open " + path.string());
  std::string out;
  char buf[1 << 16];
  for (;;) {
    const int n = gzread(f, buf, sizeof buf);
    if (n < 0) {
      int code = 0;
      const std::string msg = gzerror(f, &code);
      gzclose(f);
      throw DataError("cannot read " + path.string() + ": " + msg);
    }
    if (n == 0) break;
    out.append(buf, static_cast<std::size_t>(n));
  }
  gzclose(f);
  return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> rec;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;  // distinguishes "" (empty record) from a blank line
  std::size_t i = 0;
  auto end_field = [&] {
    rec.push_back(std::move(field));
    field.clear();
  };
  auto end_record = [&] {
    if (field_started || !rec.empty()) {
      end_field();
      records.push_back(std::move(rec));
    }
    rec.clear();
    field_started = false;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          i += 2;
          continue;
        }
        in_quotes = false;
      } else {
        field += c;
      }
      ++i;
      continue;
    }
    if (c == '"') {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
      field_started = true;
    } else if (c == '\n') {
      end_record();
    } else if (c == '\r') {
      if (i + 1 >= text.size() || text[i + 1] != '\n') end_record();
    } else {
      field += c;
      field_started = true;
    }
    ++i;
  }
  if (in_quotes) throw DataError("CSV: unterminated quoted field");
  end_record();
  return records;
}

LabeledDataset parse_csv_dataset(std::string_view text, std::string_view smiles_column,
                                 const std::vector<std::string>& task_columns,
                                 Strictness strictness, int workers) {
  auto records = parse_csv(text);
  if (records.empty()) throw DataError("CSV has no header row");
  const auto& header = records.front();
  std::unordered_map<std::string, std::size_t> col;
  for (std::size_t j = 0; j < header.size(); ++j) col.emplace(std::string(trim(header[j])), j);

  auto column = [&](const std::string& name) {
    auto it = col.find(name);
    if (it == col.end()) throw DataError("missing column '" + name + "'");
    return it->second;
  };
  const std::size_t smiles_idx = column(std::string(smiles_column));
  std::vector<std::string> tasks = task_columns;
  if (tasks.empty()) {
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (j != smiles_idx) tasks.emplace_back(trim(header[j]));
    }
  }
  if (tasks.empty()) throw DataError("no task columns");
  std::vector<std::size_t> task_idx;
  for (const auto& t : tasks) task_idx.push_back(column(t));

  const std::size_t n = records.size() - 1;
  std::vector<MolecularGraph> graphs(n);
  std::vector<std::string> errors(n);
  for (std::size_t r = 0; r < n; ++r) {
    if (records[r + 1].size() != header.size()) {
      throw DataError("data row " + std::to_string(r) + " has " +
                      std::to_string(records[r + 1].size()) + " fields, header has " +
                      std::to_string(header.size()));
    }
  }
  parallel_for(n, workers, [&](std::size_t r) {
    try {
      graphs[r] = parse_smiles(trim(records[r + 1][smiles_idx]));
    } catch (const Error& e) {
      errors[r] = e.what();
    }
  });

  LabeledDataset ds;
  ds.task_names = tasks;
  ds.file_rows = n;
  ds.labels.tasks = tasks.size();
  for (std::size_t r = 0; r < n; ++r) {
    const auto& rec = records[r + 1];
    if (!errors[r].empty()) {
      if (strictness == Strictness::Strict) {
        throw DataError("data row " + std::to_string(r) + ": cannot parse SMILES '" +
                        rec[smiles_idx] + "': " + errors[r]);
      }
      ds.skipped.push_back({r, rec[smiles_idx], errors[r]});
      continue;
    }
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      double v = 0.0;
      bool present = false;
      try {
        present = parse_label(rec[task_idx[t]], &v);
      } catch (const DataError& e) {
        throw DataError("data row " + std::to_string(r) + ", column '" + tasks[t] + "': " + e.what());
      }
      ds.labels.values.push_back(present ? v : 0.0);
      ds.labels.missing.push_back(present ? 0 : 1);
    }
    ds.graphs.push_back(std::move(graphs[r]));
    ds.smiles.emplace_back(trim(rec[smiles_idx]));
    ds.source_rows.push_back(r);
  }
  ds.labels.rows = ds.graphs.size();
  return ds;
}

LabeledDataset load_csv_dataset(const std::filesystem::path& path, std::string_view smiles_column,
                                const std::vector<std::string>& task_columns,
                                Strictness strictness, int workers) {
  const std::string text = read_file(path);
  try {
    return parse_csv_dataset(text, smiles_column, task_columns, strictness, workers);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_csv_dataset(std::ostream& out, const LabeledDataset& ds) {
  out << "smiles";
  for (const auto& t : ds.task_names) out << ',' << csv_escape(t);
  out << '\n';
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out << csv_escape(ds.smiles[i]);
    for (std::size_t t = 0; t < ds.labels.tasks; ++t) {
      out << ',';
      if (!ds.labels.is_missing(i, t)) out << (ds.labels.at(i, t) == 1.0 ? '1' : '0');
    }
    out << '\n';
  }
}

void write_skip_manifest(std::ostream& out, const std::vector<SkippedRow>& skipped) {
  out << "row,smiles,reason\n";
  for (const auto& s : skipped) {
    out << s.row << ',' << csv_escape(s.smiles) << ',' << csv_escape(s.reason) << '\n';
  }
}

std::vector<std::size_t> parse_index_lines(std::string_view text, const std::string& source) {
  std::vector<std::size_t> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const bool digits = std::all_of(line.begin(), line.end(), [](char c) { return c >= '0' && c <= '9'; });
    const std::string s(line);
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = digits ? std::strtoull(s.c_str(), &end, 10) : 0;
    if (!digits || errno) {
      throw DataError(source + ":" + std::to_string(line_no) + ": unparseable index '" + s + "'");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

SplitSpec load_split(const std::filesystem::path& dir) {
  auto read_part = [&](const std::string& stem) {
    for (const char* ext : {".csv", ".csv.gz", ".txt", ".txt.gz"}) {
      const auto p = dir / (stem + ext);
      if (std::filesystem::exists(p)) return parse_index_lines(read_file(p), p.string());
    }
    throw DataError("missing split file " + (dir / (stem + ".csv")).string());
  };
  SplitSpec s;
  s.train = read_part("train");
  s.valid = read_part("valid");
  s.test = read_part("test");

  std::unordered_map<std::size_t, const char*> owner;
  for (auto [name, part] : {std::pair{"train", &s.train}, {"valid", &s.valid}, {"test", &s.test}}) {
    for (std::size_t i : *part) {
      auto [it, fresh] = owner.emplace(i, name);
      if (!fresh) {
        throw DataError("split index " + std::to_string(i) + " appears in both " + it->second +
                        " and " + name);
      }
    }
  }
  return s;
}

SplitSpec bind_split(const SplitSpec& split, const LabeledDataset& ds, std::size_t* dropped) {
  std::vector<std::ptrdiff_t> position(ds.file_rows, -1);
  for (std::size_t k = 0; k < ds.source_rows.size(); ++k) position[ds.source_rows[k]] = static_cast<std::ptrdiff_t>(k);
  std::size_t lost = 0;
  auto map = [&](const std::vector<std::size_t>& part) {
    std::vector<std::size_t> out;
    out.reserve(part.size());
    for (std::size_t i : part) {
      if (i >= ds.file_rows) {
        throw DataError("split index " + std::to_string(i) + " out of range for " +
                        std::to_string(ds.file_rows) + " rows");
      }
      if (position[i] < 0) {
        ++lost;
        continue;
      }
      out.push_back(static_cast<std::size_t>(position[i]));
    }
    return out;
  };
  SplitSpec out{map(split.train), map(split.valid), map(split.test)};
  if (dropped) *dropped = lost;
  return out;
}

MolecularGraph parse_graph6(std::string_view line) {
  constexpr std::string_view kHeader = ">>graph6<<";
  if (line.starts_with(kHeader)) line.remove_prefix(kHeader.size());
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);
  for (std::size_t i = 0; i < line.size(); ++i) {
    const auto b = static_cast<unsigned char>(line[i]);
    if (b < 63 || b > 126) {
      throw FormatError("graph6: invalid byte " + std::to_string(b) + " at position " + std::to_string(i));
    }
  }
  if (line.empty()) throw FormatError("graph6: empty line");

  std::size_t pos = 0;
  auto take = [&](int count) {
    long long v = 0;
    for (int k = 0; k < count; ++k) {
      if (pos >= line.size()) throw FormatError("graph6: truncated size field");
      v = (v << 6) | (line[pos++] - 63);
    }
    return v;
  };
  long long n = 0;
  if (line[0] != 126) {
    n = take(1);
  } else if (line.size() > 1 && line[1] != 126) {
    ++pos;
    n = take(3);
  } else {
    pos += 2;
    n = take(6);
  }
  if (n > (1 << 20)) throw FormatError("graph6: graph too large");
  const long long bits = n * (n - 1) / 2;
  const long long need = (bits + 5) / 6;
  const long long have = static_cast<long long>(line.size() - pos);
  if (have != need) {
    throw FormatError("graph6: bit vector has " + std::to_string(have) + " bytes, expected " +
                      std::to_string(need));
  }
  std::vector<Edge> edges;
  long long k = 0;
  for (long long v = 1; v < n; ++v) {
    for (long long u = 0; u < v; ++u, ++k) {
      const int byte = line[pos + k / 6] - 63;
      if (byte >> (5 - k % 6) & 1) edges.push_back({int(u), int(v), BondType::Misc});
    }
  }
  // Padding bits must be zero.
  for (; k < need * 6; ++k) {
    const int byte = line[pos + k / 6] - 63;
    if (byte >> (5 - k % 6) & 1) throw FormatError("graph6: nonzero padding bits");
  }
  return MolecularGraph::build(static_cast<int>(n), std::vector<int>(n, 0), std::move(edges));
}

GraphCollection load_graph6(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  GraphCollection out;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) nl = text.size();
    ++line_no;
    std::string_view line(text.data() + start, nl - start);
    start = nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    try {
      out.push_back(parse_graph6(line));
    } catch (const FormatError& e) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace moltop
