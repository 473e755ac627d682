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
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moltop/molgraph.hpp"

namespace moltop {

inline constexpr int kDegreeBins = 11;
inline constexpr int kAtomCategories = 90;

enum class BinMode { Integer, Uniform };

//! One histogram's binning rule.
//!
//! Integer: bin i counts the value i for i < n_bins - 1; the last bin counts
//! everything >= n_bins - 1. Uniform: [lo, hi] split into n_bins half-open
//! bins, the last one closed. Values outside the range clamp to an edge bin.
struct HistogramSpec {
  BinMode mode = BinMode::Uniform;
  int n_bins = 1;
  double lo = 0.0;
  double hi = 1.0;

  int bin_of(double x) const noexcept;

  friend bool operator==(const HistogramSpec&, const HistogramSpec&) = default;
};

//! A named contiguous block of feature columns.
struct ColumnSpan {
  std::string name;
  int offset = 0;
  int width = 0;

  friend bool operator==(const ColumnSpan&, const ColumnSpan&) = default;
};

//! Column layout of a feature vector. Columns are named "<span>:<index>",
//! e.g. "ebc-hist:3" or "atom-sum:6".
struct ColumnLayout {
  std::vector<ColumnSpan> spans;
  std::vector<std::string> columns;

  int width() const noexcept { return static_cast<int>(columns.size()); }
  const ColumnSpan* find(std::string_view span) const noexcept;

  //! Layout restricted to the columns where keep[j] is true. Empty spans vanish.
  ColumnLayout select(const std::vector<bool>& keep) const;

  friend bool operator==(const ColumnLayout&, const ColumnLayout&) = default;
};

//! Dense row-major matrix of features plus its column layout.
struct FeatureMatrix {
  std::size_t rows = 0;
  ColumnLayout layout;
  std::vector<double> values;

  std::size_t cols() const noexcept { return static_cast<std::size_t>(layout.width()); }
  std::span<const double> row(std::size_t i) const { return {values.data() + i * cols(), cols()}; }
  double at(std::size_t i, std::size_t j) const { return values[i * cols() + j]; }

  //! Rows picked by index, in the given order.
  FeatureMatrix select_rows(std::span<const std::size_t> idx) const;

  //! CSV with a header of column names; reals printed with 17 significant digits.
  void write_csv(std::ostream& out) const;

  //! Compact binary form: "MTFM" magic, u32 version, u64 rows, u64 cols, then
  //! for each column its name (u32 length + bytes), then rows * cols
  //! little-endian IEEE-754 doubles.
  void write_binary(std::ostream& out) const;
  static FeatureMatrix read_binary(std::istream& in);
};

//! Feature families that can be switched off, plus binning overrides. The
//! defaults give the full feature vector.
struct FeaturizerOptions {
  bool degree_features = true;     // deg, min, max, mean, std histograms
  bool max_degree_feature = true;  // the max-of-neighbor-degrees histogram alone
  bool edge_features = true;       // ebc, ari, scan histograms
  bool atom_bond_features = true;
  bool reduced_degree_bins = true;  // 11 integer bins; otherwise n_bins integer bins
  bool drop_constant = true;
  std::optional<int> bins;  // overrides the median-size rule

  friend bool operator==(const FeaturizerOptions&, const FeaturizerOptions&) = default;
};

//! Fitted featurization state.
class FeaturizerModel {
 public:
  //! Invoked with the collection index of every graph fit() reads.
  using ReadHook = std::function<void(std::size_t)>;

  FeaturizerModel() = default;

  //! Fits bin count, continuous ranges and the retained-column mask on the
  //! training graphs. Throws DataError on an empty collection.
  static FeaturizerModel fit(const GraphCollection& train, const FeaturizerOptions& options = {},
                             int workers = 1, const ReadHook& on_read = {});

  bool fitted() const noexcept { return fitted_; }
  int n_bins() const noexcept { return n_bins_; }
  const FeaturizerOptions& options() const noexcept { return options_; }

  //! Width before the constant-column mask.
  int raw_width() const noexcept { return raw_layout_.width(); }
  int width() const noexcept { return layout_.width(); }
  const ColumnLayout& raw_layout() const noexcept { return raw_layout_; }
  const ColumnLayout& layout() const noexcept { return layout_; }
  const std::vector<bool>& retained_columns() const noexcept { return retained_; }

  //! Binning of a histogram span ("deg-hist", "mean-hist", ...). Throws if absent.
  const HistogramSpec& spec(std::string_view span) const;

  //! Unmasked feature vector (raw_width entries). Throws DataError if unfitted.
  std::vector<double> transform_raw(const MolecularGraph& g) const;

  //! Masked feature vector (width() entries).
  std::vector<double> transform(const MolecularGraph& g) const;

  //! Row i = transform(gs[i]); output is identical for any worker count.
  FeatureMatrix transform_collection(const GraphCollection& gs, int workers = 0) const;

  std::string to_json() const;
  static FeaturizerModel from_json(std::string_view text);

  friend bool operator==(const FeaturizerModel&, const FeaturizerModel&) = default;

 private:
  struct Histogram {
    std::string name;
    HistogramSpec spec;
    friend bool operator==(const Histogram&, const Histogram&) = default;
  };

  void build_layout();

  bool fitted_ = false;
  FeaturizerOptions options_;
  int n_bins_ = 0;
  double dn_mean_hi_ = 1.0;
  double dn_std_hi_ = 1.0;
  std::vector<Histogram> histograms_;
  ColumnLayout raw_layout_;
  ColumnLayout layout_;
  std::vector<bool> retained_;
};

//! Lower median of node counts: element floor((n - 1) / 2) of the sorted sizes.
int median_size(const GraphCollection& gs);

//! Raw width of the full default layout for a given bin count.
constexpr int full_raw_width(int n_bins) {
  return 3 * kDegreeBins + 5 * n_bins + 3 * kAtomCategories + 3 * kBondTypeCount;
}

//! Atom category of an atomic number: itself below 90, else 0 (unknown).
constexpr int atom_category(int atomic_number) {
  return atomic_number >= 0 && atomic_number < kAtomCategories ? atomic_number : 0;
}

}  // namespace moltop
