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

// End-to-end commands behind the moltop executable. Each cmd_* function
// runs one subcommand and, when RunConfig::out is set, writes its files there.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "moltop/datasets.hpp"
#include "moltop/expressivity.hpp"
#include "moltop/featurizer.hpp"
#include "moltop/forest.hpp"
#include "moltop/metrics.hpp"

namespace moltop {

//! Switches that undo one modelling choice each.
enum class Ablation {
  NoDegree,        // drop the five degree histograms
  NoMaxDegree,     // drop only the max-of-neighbor-degrees histogram
  NoEdgeTopology,  // drop the EBC, ARI and SCAN histograms
  NoAtomBond,      // drop atom and bond statistics
  NoReducedBins,   // degree histograms use n_bins bins instead of 11
  NoDropConstant,  // keep all-zero training columns
  UntunedForest,   // library-default forest settings
};

std::string_view to_string(Ablation a) noexcept;
Ablation parse_ablation(std::string_view name);
std::vector<std::string_view> ablation_names();

struct RunConfig {
  std::filesystem::path dataset;
  std::string smiles_column = "smiles";
  std::vector<std::string> tasks;  // empty: every non-SMILES column
  std::filesystem::path split_dir;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::optional<int> bins;
  std::optional<int> n_trees;
  Metric metric = Metric::Auroc;
  std::vector<Ablation> ablations;
  int workers = 0;
  std::filesystem::path out;
  Strictness strictness = Strictness::Strict;
  FingerprintMode mode = FingerprintMode::Exact;

  bool ablated(Ablation a) const;
  FeaturizerOptions featurizer_options() const;
  ForestConfig forest_config(std::uint64_t seed) const;

  //! Throws DataError on an empty seed list, non-positive bins or trees, or
  //! ablations that leave no feature family.
  void validate() const;
};

//! Dataset plus split bound to dataset positions.
struct PreparedData {
  LabeledDataset dataset;
  SplitSpec split;
  std::size_t dropped_split_rows = 0;
};

PreparedData prepare_data(const RunConfig& cfg);

GraphCollection pick_graphs(const GraphCollection& gs, const std::vector<std::size_t>& idx);

//! Fits on the training rows only. When `audit` is given, every dataset
//! position the fit reads is appended to it.
FeaturizerModel fit_on_train(const PreparedData& data, const FeaturizerOptions& options, int workers,
                             std::vector<std::size_t>* audit = nullptr);

struct FeaturizeResult {
  FeaturizerModel model;
  FeatureMatrix train, valid, test;
  std::vector<SkippedRow> skipped;
};

//! Writes featurizer.json, features_{train,valid,test}.csv and .mtfm
//! (binary), and skipped.csv.
FeaturizeResult cmd_featurize(const RunConfig& cfg);

//! Per seed: trains a forest on the training features and scores the valid
//! and test splits. Writes report.json. Throws DataError if a split has no
//! scorable task.
EvalReport cmd_evaluate(const RunConfig& cfg);

struct BenchmarkReport {
  std::size_t molecules = 0;
  std::size_t train_rows = 0;
  int workers = 0;
  int n_trees = 0;
  double featurize_seconds = 0.0;
  double train_seconds = 0.0;

  std::string to_json() const;
};

//! Times featurization of the whole dataset and training of one forest.
BenchmarkReport cmd_benchmark(const RunConfig& cfg);

//! Reads cfg.dataset as graph6 and counts indistinguishable pairs. Writes
//! expressivity.json.
IndistinguishableReport cmd_expressivity(const RunConfig& cfg);

struct ImportanceReport {
  struct Run {
    std::string dataset;
    std::uint64_t seed = 0;
    GroupImportance groups;
  };
  std::vector<Run> runs;
  GroupImportance mean;

  std::string to_json() const;
};

//! Trains one forest per seed per config and averages grouped importances.
//! Writes importance.json into the first config's output directory.
ImportanceReport cmd_importance(const std::vector<RunConfig>& cfgs);

}  // namespace moltop
