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
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moltop/featurizer.hpp"
#include "moltop/labels.hpp"

namespace moltop {

enum class SplitCriterion { Entropy, Gini };

struct ForestConfig {
  int n_trees = 1000;
  int min_samples_split = 10;
  int min_samples_leaf = 1;
  std::optional<int> max_features;  // default: floor(sqrt(n_features)), at least 1
  std::optional<int> max_depth;     // default: unlimited
  std::uint64_t seed = 0;
  SplitCriterion criterion = SplitCriterion::Entropy;

  //! Library-default settings (100 trees, Gini, split at 2 samples).
  static ForestConfig untuned(std::uint64_t seed);

  friend bool operator==(const ForestConfig&, const ForestConfig&) = default;
};

//! A single node. Internal nodes route x[feature] <= threshold to `left`.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  // Sample-weighted impurity decrease of this split (internal nodes only).
  double gain = 0.0;
  // Leaves: offset of this leaf's per-task positive counts in Tree::positives.
  int leaf = -1;
  // Bootstrap samples (with multiplicity) reaching this node.
  std::uint32_t samples = 0;

  bool is_leaf() const noexcept { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  // n_tasks positive counts per leaf; the negative count is samples - positive.
  std::vector<std::uint32_t> positives;

  friend bool operator==(const Tree&, const Tree&) = default;
};

//! Multitask random forest of binary classification trees.
//!
//! Each tree is grown on a bootstrap sample drawn from a generator seeded
//! with tree_seed(config.seed, tree index). At every node up to max_features
//! features that are not constant in the node are tried in random order; the
//! split minimizing the sample-weighted mean of per-task impurities wins,
//! ties going to the lowest feature index and then the lowest threshold.
class Forest {
 public:
  Forest() = default;

  //! Missing labels are read as 0. Throws DataError on shape mismatch or
  //! labels outside {0, 1}.
  static Forest train(std::span<const double> x, std::size_t rows, std::size_t cols,
                      const LabelMatrix& y, const ForestConfig& config, int workers = 0);
  static Forest train(const FeatureMatrix& x, const LabelMatrix& y, const ForestConfig& config,
                      int workers = 0) {
    return train(x.values, x.rows, x.cols(), y, config, workers);
  }

  //! N x T positive-class probabilities (mean of leaf fractions over trees).
  std::vector<double> predict_proba(std::span<const double> x, std::size_t rows,
                                    int workers = 0) const;
  std::vector<double> predict_proba(const FeatureMatrix& x, int workers = 0) const;

  //! Mean decrease in impurity per feature, normalized per tree and overall.
  std::vector<double> feature_importance() const;

  std::size_t n_features() const noexcept { return n_features_; }
  std::size_t n_tasks() const noexcept { return n_tasks_; }
  const ForestConfig& config() const noexcept { return config_; }
  const std::vector<Tree>& trees() const noexcept { return trees_; }

  //! Appends the trees of another forest with the same shape.
  void merge(const Forest& other);

  //! Line-oriented text form, see docs/formats.md.
  std::string save() const;
  static Forest load(std::string_view text);

  friend bool operator==(const Forest&, const Forest&) = default;

 private:
  std::size_t n_features_ = 0;
  std::size_t n_tasks_ = 0;
  ForestConfig config_;
  std::vector<Tree> trees_;
};

//! Seed of tree `index`: splitmix64 of the forest seed mixed with the index.
std::uint64_t tree_seed(std::uint64_t seed, std::uint64_t index) noexcept;

//! Uniform integer in [0, n) by rejection sampling; identical on every platform.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t n);

}  // namespace moltop
