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

#include "moltop/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "moltop/error.hpp"
#include "moltop/parallel.hpp"

namespace moltop {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr std::pair<Ablation, std::string_view> kAblations[] = {
    {Ablation::NoDegree, "no-degree"},
    {Ablation::NoMaxDegree, "no-max-degree"},
    {Ablation::NoEdgeTopology, "no-edge-topo"},
    {Ablation::NoAtomBond, "no-atom-bond"},
    {Ablation::NoReducedBins, "no-reduced-bins"},
    {Ablation::NoDropConstant, "no-drop-constant"},
    {Ablation::UntunedForest, "untuned-forest"},
};

std::ofstream open_out(const fs::path& p, std::ios::openmode mode = std::ios::out) {
  std::ofstream f(p, mode);
  if (!f) throw DataError("cannot write " + p.string());
  return f;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create directory " + dir.string() + ": " + ec.message());
}

json groups_json(const GroupImportance& g) {
  json j = json::object();
  for (const auto& [name, v] : g) j[name] = v;
  return j;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::string_view to_string(Ablation a) noexcept {
  for (const auto& [k, name] : kAblations) {
    if (k == a) return name;
  }
  return "unknown";
}

Ablation parse_ablation(std::string_view name) {
  for (const auto& [k, n] : kAblations) {
    if (n == name) return k;
  }
  std::string all;
  for (const auto& [k, n] : kAblations) all += (all.empty() ? "" : ", ") + std::string(n);
  throw DataError("unknown ablation '" + std::string(name) + "' (expected one of " + all + ")");
}

std::vector<std::string_view> ablation_names() {
  std::vector<std::string_view> out;
  for (const auto& [k, n] : kAblations) out.push_back(n);
  return out;
}

bool RunConfig::ablated(Ablation a) const {
  return std::find(ablations.begin(), ablations.end(), a) != ablations.end();
}

FeaturizerOptions RunConfig::featurizer_options() const {
  FeaturizerOptions o;
  o.degree_features = !ablated(Ablation::NoDegree);
  o.max_degree_feature = !ablated(Ablation::NoMaxDegree);
  o.edge_features = !ablated(Ablation::NoEdgeTopology);
  o.atom_bond_features = !ablated(Ablation::NoAtomBond);
  o.reduced_degree_bins = !ablated(Ablation::NoReducedBins);
  o.drop_constant = !ablated(Ablation::NoDropConstant);
  o.bins = bins;
  return o;
}

ForestConfig RunConfig::forest_config(std::uint64_t seed) const {
  ForestConfig c;
  if (ablated(Ablation::UntunedForest)) c = ForestConfig::untuned(seed);
  c.seed = seed;
  if (n_trees) c.n_trees = *n_trees;
  return c;
}

void RunConfig::validate() const {
  if (seeds.empty()) throw DataError("seed list is empty");
  if (bins && *bins < 1) throw DataError("--bins must be positive");
  if (n_trees && *n_trees < 1) throw DataError("--trees must be positive");
  const auto o = featurizer_options();
  if (!o.degree_features && !o.edge_features && !o.atom_bond_features) {
    throw DataError("ablations disable every feature family");
  }
}

PreparedData prepare_data(const RunConfig& cfg) {
  cfg.validate();
  PreparedData d;
  d.dataset = load_csv_dataset(cfg.dataset, cfg.smiles_column, cfg.tasks, cfg.strictness, cfg.workers);
  if (cfg.split_dir.empty()) {
    d.split.train.resize(d.dataset.size());
    std::iota(d.split.train.begin(), d.split.train.end(), 0);
  } else {
    d.split = bind_split(load_split(cfg.split_dir), d.dataset, &d.dropped_split_rows);
  }
  if (d.split.train.empty()) throw DataError("training split is empty");
  return d;
}

GraphCollection pick_graphs(const GraphCollection& gs, const std::vector<std::size_t>& idx) {
  GraphCollection out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(gs.at(i));
  return out;
}

FeaturizerModel fit_on_train(const PreparedData& data, const FeaturizerOptions& options, int workers,
                             std::vector<std::size_t>* audit) {
  const GraphCollection train = pick_graphs(data.dataset.graphs, data.split.train);
  FeaturizerModel::ReadHook hook;
  if (audit) hook = [&](std::size_t i) { audit->push_back(data.split.train[i]); };
  return FeaturizerModel::fit(train, options, workers, hook);
}

FeaturizeResult cmd_featurize(const RunConfig& cfg) {
  const PreparedData data = prepare_data(cfg);
  FeaturizeResult r;
  r.model = fit_on_train(data, cfg.featurizer_options(), cfg.workers);
  r.train = r.model.transform_collection(pick_graphs(data.dataset.graphs, data.split.train), cfg.workers);
  r.valid = r.model.transform_collection(pick_graphs(data.dataset.graphs, data.split.valid), cfg.workers);
  r.test = r.model.transform_collection(pick_graphs(data.dataset.graphs, data.split.test), cfg.workers);
  r.skipped = data.dataset.skipped;

  if (!cfg.out.empty()) {
    ensure_dir(cfg.out);
    open_out(cfg.out / "featurizer.json") << r.model.to_json();
    for (auto [name, m] : {std::pair{"train", &r.train}, {"valid", &r.valid}, {"test", &r.test}}) {
      auto csv = open_out(cfg.out / (std::string("features_") + name + ".csv"));
      m->write_csv(csv);
      auto bin = open_out(cfg.out / (std::string("features_") + name + ".mtfm"), std::ios::binary);
      m->write_binary(bin);
    }
    auto skipped = open_out(cfg.out / "skipped.csv");
    write_skip_manifest(skipped, r.skipped);
  }
  return r;
}

EvalReport cmd_evaluate(const RunConfig& cfg) {
  const PreparedData data = prepare_data(cfg);
  if (cfg.split_dir.empty()) throw DataError("evaluate needs --split-dir");
  const FeaturizerModel model = fit_on_train(data, cfg.featurizer_options(), cfg.workers);
  const auto& ds = data.dataset;
  const FeatureMatrix x_train = model.transform_collection(pick_graphs(ds.graphs, data.split.train), cfg.workers);
  const LabelMatrix y_train = ds.labels.select_rows(data.split.train);

  struct Part {
    const char* name;
    FeatureMatrix x;
    LabelMatrix y;
  };
  std::vector<Part> parts;
  for (auto [name, idx] : {std::pair{"valid", &data.split.valid}, {"test", &data.split.test}}) {
    parts.push_back({name, model.transform_collection(pick_graphs(ds.graphs, *idx), cfg.workers),
                     ds.labels.select_rows(*idx)});
  }

  EvalReport report;
  report.metric = cfg.metric;
  report.seeds = cfg.seeds;
  report.tasks = ds.task_names;
  for (const auto& p : parts) report.splits.push_back({p.name, {}, {}});
  for (std::uint64_t seed : cfg.seeds) {
    const Forest forest = Forest::train(x_train, y_train, cfg.forest_config(seed), cfg.workers);
    for (std::size_t k = 0; k < parts.size(); ++k) {
      const auto scores = forest.predict_proba(parts[k].x, cfg.workers);
      auto per_task = per_task_scores(cfg.metric, scores, parts[k].y);
      const auto mean = multitask_score(cfg.metric, scores, parts[k].y);
      if (!mean) {
        throw DataError(std::string("no task of the ") + parts[k].name + " split has both classes");
      }
      report.splits[k].per_task.push_back(std::move(per_task));
      report.splits[k].per_seed.push_back(*mean);
    }
  }
  if (!cfg.out.empty()) {
    ensure_dir(cfg.out);
    open_out(cfg.out / "report.json") << report.to_json();
  }
  return report;
}

std::string BenchmarkReport::to_json() const {
  json j;
  j["format"] = "moltop-benchmark";
  j["version"] = 1;
  j["molecules"] = molecules;
  j["train_rows"] = train_rows;
  j["workers"] = workers;
  j["n_trees"] = n_trees;
  j["featurize_seconds"] = featurize_seconds;
  j["train_seconds"] = train_seconds;
  return j.dump(2) + "\n";
}

BenchmarkReport cmd_benchmark(const RunConfig& cfg) {
  const PreparedData data = prepare_data(cfg);
  if (data.dataset.size() == 0) throw DataError("benchmark needs at least one molecule");
  BenchmarkReport r;
  r.molecules = data.dataset.size();
  r.train_rows = data.split.train.size();
  r.workers = resolve_workers(cfg.workers);

  const auto t0 = std::chrono::steady_clock::now();
  const FeaturizerModel model = fit_on_train(data, cfg.featurizer_options(), cfg.workers);
  const FeatureMatrix all = model.transform_collection(data.dataset.graphs, cfg.workers);
  r.featurize_seconds = seconds_since(t0);

  const FeatureMatrix x = all.select_rows(data.split.train);
  const LabelMatrix y = data.dataset.labels.select_rows(data.split.train);
  const ForestConfig fc = cfg.forest_config(cfg.seeds.front());
  r.n_trees = fc.n_trees;
  const auto t1 = std::chrono::steady_clock::now();
  const Forest forest = Forest::train(x, y, fc, cfg.workers);
  r.train_seconds = seconds_since(t1);

  if (!cfg.out.empty()) {
    ensure_dir(cfg.out);
    open_out(cfg.out / "benchmark.json") << r.to_json();
  }
  return r;
}

IndistinguishableReport cmd_expressivity(const RunConfig& cfg) {
  const GraphCollection gs = load_graph6(cfg.dataset);
  const auto r = count_indistinguishable(gs, cfg.mode, cfg.bins, cfg.workers);
  if (!cfg.out.empty()) {
    ensure_dir(cfg.out);
    open_out(cfg.out / "expressivity.json") << r.to_json();
  }
  return r;
}

std::string ImportanceReport::to_json() const {
  json j;
  j["format"] = "moltop-importance";
  j["version"] = 1;
  json rs = json::array();
  for (const auto& r : runs) {
    rs.push_back({{"dataset", r.dataset}, {"seed", r.seed}, {"groups", groups_json(r.groups)}});
  }
  j["runs"] = rs;
  j["mean"] = groups_json(mean);
  return j.dump(2) + "\n";
}

ImportanceReport cmd_importance(const std::vector<RunConfig>& cfgs) {
  if (cfgs.empty()) throw DataError("importance needs at least one dataset");
  ImportanceReport report;
  std::vector<GroupImportance> per_dataset;
  for (const RunConfig& cfg : cfgs) {
    const PreparedData data = prepare_data(cfg);
    const FeaturizerModel model = fit_on_train(data, cfg.featurizer_options(), cfg.workers);
    const FeatureMatrix x =
        model.transform_collection(pick_graphs(data.dataset.graphs, data.split.train), cfg.workers);
    const LabelMatrix y = data.dataset.labels.select_rows(data.split.train);
    std::vector<GroupImportance> seeds;
    for (std::uint64_t seed : cfg.seeds) {
      const Forest f = Forest::train(x, y, cfg.forest_config(seed), cfg.workers);
      auto groups = aggregate_importance(f.feature_importance(), model.layout());
      report.runs.push_back({cfg.dataset.string(), seed, groups});
      seeds.push_back(std::move(groups));
    }
    per_dataset.push_back(average_importance(seeds));
  }
  report.mean = average_importance(per_dataset);
  const fs::path& out = cfgs.front().out;
  if (!out.empty()) {
    ensure_dir(out);
    open_out(out / "importance.json") << report.to_json();
  }
  return report;
}

}  // namespace moltop
