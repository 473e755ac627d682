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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "moltop/featurizer.hpp"
#include "moltop/labels.hpp"

namespace moltop {

enum class Metric { Auroc, AveragePrecision };

std::string_view to_string(Metric m) noexcept;
Metric parse_metric(std::string_view name);  // "auroc" or "ap"

//! Area under the ROC curve as the Mann-Whitney statistic: the fraction of
//! (positive, negative) pairs ranked correctly, ties counting one half.
//! nullopt when either class is absent. Labels must be 0 or 1.
std::optional<double> auroc(std::span<const double> scores, std::span<const double> labels);

//! Mean over positives of the precision at each positive's rank, ranking by
//! descending score with ties kept in input order. nullopt without positives.
std::optional<double> average_precision(std::span<const double> scores,
                                        std::span<const double> labels);

std::optional<double> score(Metric m, std::span<const double> scores, std::span<const double> labels);

//! Per-task metric over the rows whose label is present; nullopt for tasks
//! left with a single class (or, for AP, no positives).
std::vector<std::optional<double>> per_task_scores(Metric m, std::span<const double> scores,
                                                   const LabelMatrix& y);

//! Mean of the defined per-task values; nullopt when no task is defined.
std::optional<double> multitask_score(Metric m, std::span<const double> scores, const LabelMatrix& y);

inline std::optional<double> multitask_auroc(std::span<const double> scores, const LabelMatrix& y) {
  return multitask_score(Metric::Auroc, scores, y);
}

//! Exact two-sided Wilcoxon signed-rank p-value for paired samples.
//! Zero differences are dropped, tied magnitudes get average ranks, and the
//! null distribution of the rank sum is enumerated exactly.
//! Throws DataError on length mismatch or when no nonzero difference remains.
double wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

//! Importance summed per feature group. Groups are the eight topological
//! histograms ("deg", "min", "max", "mean", "std", "ebc", "ari", "scan"),
//! then "atom" and "bond"; groups absent from the layout are omitted.
using GroupImportance = std::vector<std::pair<std::string, double>>;

GroupImportance aggregate_importance(std::span<const double> importance, const ColumnLayout& layout);

//! Element-wise mean of group vectors; groups missing from some inputs count as 0.
GroupImportance average_importance(const std::vector<GroupImportance>& runs);

//! Group of a span name, e.g. "ebc-hist" -> "ebc", "atom-mean" -> "atom".
std::string feature_group(std::string_view span);

//! Mean and population standard deviation.
std::pair<double, double> mean_std(std::span<const double> v);

//! Scores of one data split across seeds.
struct SplitScores {
  std::string split;
  std::vector<std::vector<std::optional<double>>> per_task;  // [seed][task]
  std::vector<double> per_seed;                              // task mean per seed

  double mean() const { return mean_std(per_seed).first; }
  double std() const { return mean_std(per_seed).second; }

  friend bool operator==(const SplitScores&, const SplitScores&) = default;
};

struct EvalReport {
  Metric metric = Metric::Auroc;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> tasks;
  std::vector<SplitScores> splits;

  const SplitScores& split(std::string_view name) const;

  //! JSON with every per-seed value; reals keep full round-trip precision.
  std::string to_json() const;
  static EvalReport from_json(std::string_view text);

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

}  // namespace moltop
