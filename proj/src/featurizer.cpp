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

#include "moltop/featurizer.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "moltop/descriptors.hpp"
#include "moltop/error.hpp"
#include "moltop/parallel.hpp"

namespace moltop {
namespace {

using json = nlohmann::json;

constexpr int kModelVersion = 1;
constexpr std::uint32_t kMatrixVersion = 1;
constexpr std::array<char, 4> kMatrixMagic = {'M', 'T', 'F', 'M'};

const char* kAtomSpans[3] = {"atom-sum", "atom-mean", "atom-std"};
const char* kBondSpans[3] = {"bond-sum", "bond-mean", "bond-std"};

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Sum, mean and population std of an indicator vector with `count` ones out of `total`.
void indicator_stats(long long count, long long total, double* sum, double* mean, double* sd) {
  *sum = static_cast<double>(count);
  if (total == 0) {
    *mean = 0.0;
    *sd = 0.0;
    return;
  }
  const double p = static_cast<double>(count) / static_cast<double>(total);
  *mean = p;
  *sd = std::sqrt(p * (1.0 - p));
}

void put_u32(std::ostream& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::ostream& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_le(std::istream& in, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw FormatError("feature matrix: truncated payload");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return v;
}

}  // namespace

int HistogramSpec::bin_of(double x) const noexcept {
  if (mode == BinMode::Integer) {
    if (!(x > 0.0)) return 0;
    const double r = std::round(x);
    return r >= n_bins - 1 ? n_bins - 1 : static_cast<int>(r);
  }
  if (!(x > lo)) return 0;
  if (x >= hi) return n_bins - 1;
  const int b = static_cast<int>((x - lo) / (hi - lo) * n_bins);
  return std::min(b, n_bins - 1);
}

const ColumnSpan* ColumnLayout::find(std::string_view span) const noexcept {
  for (const auto& s : spans) {
    if (s.name == span) return &s;
  }
  return nullptr;
}

ColumnLayout ColumnLayout::select(const std::vector<bool>& keep) const {
  if (keep.size() != columns.size()) throw DataError("column mask length does not match layout");
  ColumnLayout out;
  for (const auto& s : spans) {
    ColumnSpan t{s.name, out.width(), 0};
    for (int j = s.offset; j < s.offset + s.width; ++j) {
      if (!keep[j]) continue;
      out.columns.push_back(columns[j]);
      ++t.width;
    }
    if (t.width > 0) out.spans.push_back(std::move(t));
  }
  return out;
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> idx) const {
  FeatureMatrix out;
  out.layout = layout;
  out.rows = idx.size();
  out.values.reserve(idx.size() * cols());
  for (std::size_t i : idx) {
    if (i >= rows) throw DataError("row index " + std::to_string(i) + " out of range");
    auto r = row(i);
    out.values.insert(out.values.end(), r.begin(), r.end());
  }
  return out;
}

void FeatureMatrix::write_csv(std::ostream& out) const {
  for (std::size_t j = 0; j < cols(); ++j) out << (j ? "," : "") << layout.columns[j];
  out << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols(); ++j) out << (j ? "," : "") << format_real(at(i, j));
    out << '\n';
  }
}

void FeatureMatrix::write_binary(std::ostream& out) const {
  out.write(kMatrixMagic.data(), kMatrixMagic.size());
  put_u32(out, kMatrixVersion);
  put_u64(out, rows);
  put_u64(out, cols());
  for (const auto& name : layout.columns) {
    put_u32(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
  }
  for (double v : values) put_u64(out, std::bit_cast<std::uint64_t>(v));
}

FeatureMatrix FeatureMatrix::read_binary(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMatrixMagic) throw FormatError("feature matrix: bad magic");
  const auto version = static_cast<std::uint32_t>(get_le(in, 4));
  if (version > kMatrixVersion) {
    throw VersionError("feature matrix: unsupported version " + std::to_string(version));
  }
  FeatureMatrix m;
  m.rows = get_le(in, 8);
  const std::uint64_t cols = get_le(in, 8);
  if (cols > (1u << 24)) throw FormatError("feature matrix: implausible column count");
  m.layout.columns.reserve(cols);
  for (std::uint64_t j = 0; j < cols; ++j) {
    const auto len = get_le(in, 4);
    if (len > 4096) throw FormatError("feature matrix: implausible column name length");
    std::string name(len, '\0');
    in.read(name.data(), static_cast<std::streamsize>(len));
    if (!in) throw FormatError("feature matrix: truncated payload");
    m.layout.columns.push_back(std::move(name));
  }
  // Spans are recovered from the "<span>:<index>" column names.
  for (std::size_t j = 0; j < m.layout.columns.size(); ++j) {
    const auto& c = m.layout.columns[j];
    const std::string span = c.substr(0, c.rfind(':'));
    if (m.layout.spans.empty() || m.layout.spans.back().name != span) {
      m.layout.spans.push_back({span, static_cast<int>(j), 0});
    }
    ++m.layout.spans.back().width;
  }
  m.values.resize(m.rows * cols);
  for (double& v : m.values) v = std::bit_cast<double>(get_le(in, 8));
  return m;
}

int median_size(const GraphCollection& gs) {
  if (gs.empty()) throw DataError("median of an empty collection");
  std::vector<int> sizes;
  sizes.reserve(gs.size());
  for (const auto& g : gs) sizes.push_back(g.node_count());
  const std::size_t k = (sizes.size() - 1) / 2;
  std::nth_element(sizes.begin(), sizes.begin() + k, sizes.end());
  return sizes[k];
}

void FeaturizerModel::build_layout() {
  const FeaturizerOptions& o = options_;
  const int deg_bins = o.reduced_degree_bins ? kDegreeBins : n_bins_;
  histograms_.clear();
  if (o.degree_features) {
    histograms_.push_back({"deg-hist", {BinMode::Integer, deg_bins, 0.0, deg_bins - 1.0}});
    histograms_.push_back({"min-hist", {BinMode::Integer, deg_bins, 0.0, deg_bins - 1.0}});
    if (o.max_degree_feature) {
      histograms_.push_back({"max-hist", {BinMode::Integer, deg_bins, 0.0, deg_bins - 1.0}});
    }
    histograms_.push_back({"mean-hist", {BinMode::Uniform, n_bins_, 0.0, dn_mean_hi_}});
    histograms_.push_back({"std-hist", {BinMode::Uniform, n_bins_, 0.0, dn_std_hi_}});
  }
  if (o.edge_features) {
    histograms_.push_back({"ebc-hist", {BinMode::Uniform, n_bins_, 0.0, 1.0}});
    histograms_.push_back({"ari-hist", {BinMode::Uniform, n_bins_, -1.0, 1.0}});
    histograms_.push_back({"scan-hist", {BinMode::Uniform, n_bins_, 0.0, 1.0}});
  }
  if (histograms_.empty() && !o.atom_bond_features) {
    throw DataError("featurizer options disable every feature family");
  }

  raw_layout_ = {};
  auto add_span = [&](const std::string& name, int width) {
    raw_layout_.spans.push_back({name, raw_layout_.width(), width});
    for (int i = 0; i < width; ++i) raw_layout_.columns.push_back(name + ":" + std::to_string(i));
  };
  for (const auto& h : histograms_) add_span(h.name, h.spec.n_bins);
  if (o.atom_bond_features) {
    for (const char* s : kAtomSpans) add_span(s, kAtomCategories);
    for (const char* s : kBondSpans) add_span(s, kBondTypeCount);
  }
}

const HistogramSpec& FeaturizerModel::spec(std::string_view span) const {
  for (const auto& h : histograms_) {
    if (h.name == span) return h.spec;
  }
  throw DataError("no histogram span named " + std::string(span));
}

FeaturizerModel FeaturizerModel::fit(const GraphCollection& train, const FeaturizerOptions& options,
                                     int workers, const ReadHook& on_read) {
  if (train.empty()) throw DataError("cannot fit a featurizer on an empty collection");
  if (options.bins && *options.bins < 1) throw DataError("bin count must be positive");

  FeaturizerModel m;
  m.options_ = options;
  m.n_bins_ = options.bins ? *options.bins : std::max(1, median_size(train));

  // Per-graph maxima of the continuous degree statistics, reduced afterwards.
  std::vector<double> mean_hi(train.size(), 0.0);
  std::vector<double> std_hi(train.size(), 0.0);
  if (options.degree_features) {
    parallel_for(train.size(), workers, [&](std::size_t i) {
      for (const auto& s : degree_profile(train[i])) {
        mean_hi[i] = std::max(mean_hi[i], s.dn_mean);
        std_hi[i] = std::max(std_hi[i], s.dn_std);
      }
    });
  }
  const double mh = *std::max_element(mean_hi.begin(), mean_hi.end());
  const double sh = *std::max_element(std_hi.begin(), std_hi.end());
  m.dn_mean_hi_ = mh > 0.0 ? mh : 1.0;
  m.dn_std_hi_ = sh > 0.0 ? sh : 1.0;
  m.build_layout();
  m.fitted_ = true;

  const std::size_t w = static_cast<std::size_t>(m.raw_width());
  if (options.drop_constant) {
    std::vector<std::vector<double>> rows(train.size());
    parallel_for(train.size(), workers, [&](std::size_t i) { rows[i] = m.transform_raw(train[i]); });
    m.retained_.assign(w, false);
    for (const auto& r : rows) {
      for (std::size_t j = 0; j < w; ++j) {
        if (r[j] != 0.0) m.retained_[j] = true;
      }
    }
  } else {
    m.retained_.assign(w, true);
  }
  if (on_read) {
    for (std::size_t i = 0; i < train.size(); ++i) on_read(i);
  }
  m.layout_ = m.raw_layout_.select(m.retained_);
  return m;
}

std::vector<double> FeaturizerModel::transform_raw(const MolecularGraph& g) const {
  if (!fitted_) throw DataError("featurizer model is not fitted");
  std::vector<double> out(raw_width(), 0.0);
  double* p = out.data();

  if (!histograms_.empty()) {
    NodeDegreeProfile prof;
    EdgeScores scores;
    if (options_.degree_features) prof = degree_profile(g);
    if (options_.edge_features) scores = edge_scores(g);
    for (const auto& h : histograms_) {
      auto node_hist = [&](auto field) {
        for (const auto& s : prof) p[h.spec.bin_of(field(s))] += 1.0;
      };
      auto edge_hist = [&](const std::vector<double>& vals) {
        for (double x : vals) p[h.spec.bin_of(x)] += 1.0;
      };
      if (h.name == "deg-hist") {
        node_hist([](const NodeDegreeStats& s) { return double(s.degree); });
      } else if (h.name == "min-hist") {
        node_hist([](const NodeDegreeStats& s) { return double(s.dn_min); });
      } else if (h.name == "max-hist") {
        node_hist([](const NodeDegreeStats& s) { return double(s.dn_max); });
      } else if (h.name == "mean-hist") {
        node_hist([](const NodeDegreeStats& s) { return s.dn_mean; });
      } else if (h.name == "std-hist") {
        node_hist([](const NodeDegreeStats& s) { return s.dn_std; });
      } else if (h.name == "ebc-hist") {
        for (double x : scores.ebc) p[h.spec.bin_of(snap_betweenness(x))] += 1.0;
      } else if (h.name == "ari-hist") {
        edge_hist(scores.ari);
      } else if (h.name == "scan-hist") {
        edge_hist(scores.scan);
      }
      p += h.spec.n_bins;
    }
  }

  if (options_.atom_bond_features) {
    std::array<long long, kAtomCategories> atoms{};
    for (int z : g.atomic_numbers()) ++atoms[atom_category(z)];
    const long long n = g.node_count();
    for (int c = 0; c < kAtomCategories; ++c) {
      indicator_stats(atoms[c], n, &p[c], &p[kAtomCategories + c], &p[2 * kAtomCategories + c]);
    }
    p += 3 * kAtomCategories;
    std::array<long long, kBondTypeCount> bonds{};
    for (const Edge& e : g.edges()) ++bonds[static_cast<int>(e.type)];
    const long long m = g.edge_count();
    for (int c = 0; c < kBondTypeCount; ++c) {
      indicator_stats(bonds[c], m, &p[c], &p[kBondTypeCount + c], &p[2 * kBondTypeCount + c]);
    }
  }
  return out;
}

std::vector<double> FeaturizerModel::transform(const MolecularGraph& g) const {
  const auto raw = transform_raw(g);
  std::vector<double> out;
  out.reserve(width());
  for (std::size_t j = 0; j < raw.size(); ++j) {
    if (retained_[j]) out.push_back(raw[j]);
  }
  return out;
}

FeatureMatrix FeaturizerModel::transform_collection(const GraphCollection& gs, int workers) const {
  if (!fitted_) throw DataError("featurizer model is not fitted");
  FeatureMatrix m;
  m.rows = gs.size();
  m.layout = layout_;
  const std::size_t w = static_cast<std::size_t>(width());
  m.values.assign(gs.size() * w, 0.0);
  parallel_for(gs.size(), workers, [&](std::size_t i) {
    std::vector<double> r;
    try {
      r = transform(gs[i]);
    } catch (const Error& e) {
      throw DataError("graph " + std::to_string(i) + ": " + e.what());
    }
    std::copy(r.begin(), r.end(), m.values.begin() + static_cast<std::ptrdiff_t>(i * w));
  });
  return m;
}

std::string FeaturizerModel::to_json() const {
  if (!fitted_) throw DataError("featurizer model is not fitted");
  json j;
  j["format"] = "moltop-featurizer";
  j["version"] = kModelVersion;
  j["options"] = {
      {"degree_features", options_.degree_features},
      {"max_degree_feature", options_.max_degree_feature},
      {"edge_features", options_.edge_features},
      {"atom_bond_features", options_.atom_bond_features},
      {"reduced_degree_bins", options_.reduced_degree_bins},
      {"drop_constant", options_.drop_constant},
      {"bins", options_.bins ? json(*options_.bins) : json(nullptr)},
  };
  j["n_bins"] = n_bins_;
  j["raw_width"] = raw_width();
  json hs = json::array();
  for (const auto& h : histograms_) {
    hs.push_back({{"name", h.name},
                  {"mode", h.spec.mode == BinMode::Integer ? "integer" : "uniform"},
                  {"n_bins", h.spec.n_bins},
                  {"lo", h.spec.lo},
                  {"hi", h.spec.hi}});
  }
  j["histograms"] = hs;
  json kept = json::array();
  for (std::size_t k = 0; k < retained_.size(); ++k) {
    if (retained_[k]) kept.push_back(k);
  }
  j["retained_columns"] = kept;
  j["columns"] = layout_.columns;
  return j.dump(2) + "\n";
}

FeaturizerModel FeaturizerModel::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("featurizer model: ") + e.what());
  }
  try {
    if (j.at("format") != "moltop-featurizer") throw FormatError("featurizer model: wrong format tag");
    const int version = j.at("version").get<int>();
    if (version > kModelVersion) {
      throw VersionError("featurizer model: unsupported version " + std::to_string(version));
    }
    FeaturizerModel m;
    const json& o = j.at("options");
    m.options_.degree_features = o.at("degree_features").get<bool>();
    m.options_.max_degree_feature = o.at("max_degree_feature").get<bool>();
    m.options_.edge_features = o.at("edge_features").get<bool>();
    m.options_.atom_bond_features = o.at("atom_bond_features").get<bool>();
    m.options_.reduced_degree_bins = o.at("reduced_degree_bins").get<bool>();
    m.options_.drop_constant = o.at("drop_constant").get<bool>();
    if (!o.at("bins").is_null()) m.options_.bins = o.at("bins").get<int>();
    m.n_bins_ = j.at("n_bins").get<int>();
    if (m.n_bins_ < 1) throw FormatError("featurizer model: n_bins must be positive");
    for (const json& h : j.at("histograms")) {
      if (h.at("name") == "mean-hist") m.dn_mean_hi_ = h.at("hi").get<double>();
      if (h.at("name") == "std-hist") m.dn_std_hi_ = h.at("hi").get<double>();
    }
    m.build_layout();
    // The stored histogram list must agree with what the options imply.
    const json& hs = j.at("histograms");
    if (hs.size() != m.histograms_.size()) throw FormatError("featurizer model: histogram list mismatch");
    for (std::size_t k = 0; k < hs.size(); ++k) {
      const auto& h = m.histograms_[k];
      if (hs[k].at("name") != h.name || hs[k].at("n_bins").get<int>() != h.spec.n_bins ||
          hs[k].at("lo").get<double>() != h.spec.lo || hs[k].at("hi").get<double>() != h.spec.hi) {
        throw FormatError("featurizer model: histogram " + h.name + " inconsistent");
      }
    }
    if (j.at("raw_width").get<int>() != m.raw_width()) {
      throw FormatError("featurizer model: raw_width inconsistent with layout");
    }
    m.retained_.assign(m.raw_width(), false);
    for (const json& k : j.at("retained_columns")) {
      const auto idx = k.get<long long>();
      if (idx < 0 || idx >= m.raw_width()) throw FormatError("featurizer model: retained column out of range");
      m.retained_[idx] = true;
    }
    m.layout_ = m.raw_layout_.select(m.retained_);
    m.fitted_ = true;
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("featurizer model: ") + e.what());
  }
}

}  // namespace moltop
