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

// moltop: featurize molecules, train and evaluate forests, time the
// pipeline, count indistinguishable graph pairs and group importances.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "moltop/error.hpp"
#include "moltop/pipeline.hpp"

namespace {

using moltop::RunConfig;

// "3", "0-9" and "1,4,7-8" are all accepted.
std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
  std::vector<std::uint64_t> out;
  std::size_t start = 0;
  while (start <= spec.size()) {
    std::size_t comma = spec.find(',', start);
    if (comma == std::string::npos) comma = spec.size();
    const std::string item = spec.substr(start, comma - start);
    start = comma + 1;
    if (item.empty()) throw moltop::DataError("empty item in seed list '" + spec + "'");
    const std::size_t dash = item.find('-');
    try {
      std::size_t used = 0;
      if (dash == std::string::npos) {
        out.push_back(std::stoull(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } else {
        const auto lo = std::stoull(item.substr(0, dash));
        const auto hi = std::stoull(item.substr(dash + 1), &used);
        if (used != item.size() - dash - 1 || hi < lo) throw std::invalid_argument(item);
        for (auto s = lo; s <= hi; ++s) out.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw moltop::DataError("bad seed list '" + spec + "'");
    }
  }
  return out;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size() && !s.empty()) {
    std::size_t comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    out.push_back(s.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

struct Flags {
  std::vector<std::string> datasets;
  std::vector<std::string> split_dirs;
  std::string smiles_col = "smiles";
  std::string tasks;
  std::string seeds = "0-9";
  std::optional<int> bins;
  std::optional<int> trees;
  std::string metric = "auroc";
  std::vector<std::string> ablate;
  int workers = 0;
  std::string out;
  bool strict = false;
  bool lenient = false;
  std::string mode = "exact";
};

void add_common(CLI::App* cmd, Flags& f, bool multi_dataset) {
  if (multi_dataset) {
    cmd->add_option("--dataset", f.datasets, "Input CSV (repeatable)")->required();
    cmd->add_option("--split-dir", f.split_dirs, "Split directory per dataset (repeatable)");
  } else {
    cmd->add_option("--dataset", f.datasets, "Input file")->required()->expected(1);
    cmd->add_option("--split-dir", f.split_dirs, "Directory with train/valid/test index files")
        ->expected(1);
  }
  cmd->add_option("--smiles-col", f.smiles_col, "SMILES column name")->capture_default_str();
  cmd->add_option("--tasks", f.tasks, "Comma-separated task columns (default: all others)");
  cmd->add_option("--seeds", f.seeds, "Seeds, e.g. 0-9 or 1,3,5")->capture_default_str();
  cmd->add_option("--bins", f.bins, "Override the median-size bin count");
  cmd->add_option("--trees", f.trees, "Override the number of trees");
  cmd->add_option("--metric", f.metric, "auroc or ap")
      ->check(CLI::IsMember({"auroc", "ap"}))
      ->capture_default_str();
  const auto names = moltop::ablation_names();
  cmd->add_option("--ablate", f.ablate, "Disable a modelling choice (repeatable)")
      ->check(CLI::IsMember(std::vector<std::string>(names.begin(), names.end())));
  cmd->add_option("--workers", f.workers, "Worker threads (0 = all cores)")->capture_default_str();
  cmd->add_option("--out", f.out, "Output directory");
  auto* strict = cmd->add_flag("--strict", f.strict, "Fail on unparseable SMILES (default)");
  cmd->add_flag("--lenient", f.lenient, "Skip unparseable SMILES and list them")->excludes(strict);
}

std::vector<RunConfig> build_configs(const Flags& f) {
  std::vector<RunConfig> out;
  if (!f.split_dirs.empty() && f.split_dirs.size() != f.datasets.size()) {
    throw moltop::DataError("give one --split-dir per --dataset");
  }
  for (std::size_t k = 0; k < f.datasets.size(); ++k) {
    RunConfig c;
    c.dataset = f.datasets[k];
    if (!f.split_dirs.empty()) c.split_dir = f.split_dirs[k];
    c.smiles_column = f.smiles_col;
    c.tasks = split_commas(f.tasks);
    c.seeds = parse_seeds(f.seeds);
    c.bins = f.bins;
    c.n_trees = f.trees;
    c.metric = moltop::parse_metric(f.metric);
    for (const auto& a : f.ablate) c.ablations.push_back(moltop::parse_ablation(a));
    c.workers = f.workers;
    c.out = f.out;
    c.strictness = f.lenient ? moltop::Strictness::Lenient : moltop::Strictness::Strict;
    c.mode = moltop::parse_fingerprint_mode(f.mode);
    c.validate();
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moltop: topological molecular features with random forests"};
  app.require_subcommand(1);
  Flags f;

  auto* featurize = app.add_subcommand("featurize", "Fit the featurizer on train, write feature matrices");
  add_common(featurize, f, false);
  auto* evaluate = app.add_subcommand("evaluate", "Train per seed and score valid/test splits");
  add_common(evaluate, f, false);
  auto* benchmark = app.add_subcommand("benchmark", "Time featurization and training");
  add_common(benchmark, f, false);
  auto* expressivity = app.add_subcommand("expressivity", "Count indistinguishable graph6 pairs");
  add_common(expressivity, f, false);
  expressivity->add_option("--mode", f.mode, "histogram or exact")
      ->check(CLI::IsMember({"histogram", "exact"}))
      ->capture_default_str();
  auto* importance = app.add_subcommand("importance", "Grouped feature importances over seeds");
  add_common(importance, f, true);

  CLI11_PARSE(app, argc, argv);

  try {
    const auto cfgs = build_configs(f);
    if (featurize->parsed()) {
      const auto r = moltop::cmd_featurize(cfgs.front());
      std::printf("n_bins %d, width %d of %d, rows train/valid/test %zu/%zu/%zu, skipped %zu\n",
                  r.model.n_bins(), r.model.width(), r.model.raw_width(), r.train.rows, r.valid.rows,
                  r.test.rows, r.skipped.size());
    } else if (evaluate->parsed()) {
      const auto r = moltop::cmd_evaluate(cfgs.front());
      for (const auto& s : r.splits) {
        std::printf("%s %s: %.4f +- %.4f over %zu seeds\n", s.split.c_str(),
                    std::string(moltop::to_string(r.metric)).c_str(), s.mean(), s.std(),
                    s.per_seed.size());
      }
    } else if (benchmark->parsed()) {
      const auto r = moltop::cmd_benchmark(cfgs.front());
      std::cout << r.to_json();
    } else if (expressivity->parsed()) {
      const auto r = moltop::cmd_expressivity(cfgs.front());
      std::cout << r.to_json();
    } else if (importance->parsed()) {
      const auto r = moltop::cmd_importance(cfgs);
      for (const auto& [name, v] : r.mean) std::printf("%-5s %.4f\n", name.c_str(), v);
    }
  } catch (const moltop::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
