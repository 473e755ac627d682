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

#include "moltop/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "moltop/error.hpp"

namespace moltop {
namespace {

using json = nlohmann::json;

constexpr int kReportVersion = 1;

void check_binary(std::span<const double> scores, std::span<const double> labels) {
  if (scores.size() != labels.size()) {
    throw DataError("scores and labels differ in length (" + std::to_string(scores.size()) +
                    " vs " + std::to_string(labels.size()) + ")");
  }
  for (double y : labels) {
    if (y != 0.0 && y != 1.0) throw DataError("labels must be 0 or 1");
  }
}

const char* kGroups[] = {"deg", "min", "max", "mean", "std", "ebc", "ari", "scan", "atom", "bond"};

}  // namespace

std::string_view to_string(Metric m) noexcept {
  return m == Metric::Auroc ? "auroc" : "ap";
}

Metric parse_metric(std::string_view name) {
  if (name == "auroc") return Metric::Auroc;
  if (name == "ap") return Metric::AveragePrecision;
  throw DataError("unknown metric '" + std::string(name) + "' (expected auroc or ap)");
}

std::optional<double> auroc(std::span<const double> scores, std::span<const double> labels) {
  check_binary(scores, labels);
  const std::size_t n = scores.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Walk groups of equal score: each positive beats every negative seen in
  // earlier groups and ties with negatives of its own group.
  double negatives_below = 0.0;
  double credit = 0.0;
  double pos = 0.0;
  double neg = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    double gp = 0.0;
    double gn = 0.0;
    while (j < n && scores[idx[j]] == scores[idx[i]]) {
      (labels[idx[j]] == 1.0 ? gp : gn) += 1.0;
      ++j;
    }
    credit += gp * negatives_below + 0.5 * gp * gn;
    negatives_below += gn;
    pos += gp;
    neg += gn;
    i = j;
  }
  if (pos == 0.0 || neg == 0.0) return std::nullopt;
  return credit / (pos * neg);
}

std::optional<double> average_precision(std::span<const double> scores,
                                        std::span<const double> labels) {
  check_binary(scores, labels);
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  double hits = 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (labels[idx[k]] != 1.0) continue;
    hits += 1.0;
    sum += hits / static_cast<double>(k + 1);
  }
  if (hits == 0.0) return std::nullopt;
  return sum / hits;
}

std::optional<double> score(Metric m, std::span<const double> scores, std::span<const double> labels) {
  return m == Metric::Auroc ? auroc(scores, labels) : average_precision(scores, labels);
}

std::vector<std::optional<double>> per_task_scores(Metric m, std::span<const double> scores,
                                                   const LabelMatrix& y) {
  if (scores.size() != y.rows * y.tasks) throw DataError("score matrix shape does not match labels");
  std::vector<std::optional<double>> out(y.tasks);
  std::vector<double> s;
  std::vector<double> l;
  for (std::size_t t = 0; t < y.tasks; ++t) {
    s.clear();
    l.clear();
    for (std::size_t i = 0; i < y.rows; ++i) {
      if (y.is_missing(i, t)) continue;
      s.push_back(scores[i * y.tasks + t]);
      l.push_back(y.at(i, t));
    }
    const bool has_pos = std::find(l.begin(), l.end(), 1.0) != l.end();
    const bool has_neg = std::find(l.begin(), l.end(), 0.0) != l.end();
    if (!has_pos || !has_neg) continue;  // single-class task
    out[t] = score(m, s, l);
  }
  return out;
}

std::optional<double> multitask_score(Metric m, std::span<const double> scores, const LabelMatrix& y) {
  const auto per = per_task_scores(m, scores, y);
  double sum = 0.0;
  int n = 0;
  for (const auto& v : per) {
    if (!v) continue;
    sum += *v;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

double wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DataError("paired samples differ in length");
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) d.push_back(a[i] - b[i]);
  }
  const std::size_t n = d.size();
  if (n == 0) throw DataError("Wilcoxon test needs at least one nonzero difference");

  // Doubled average ranks of |d| are integers even with ties.
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t x, std::size_t y) { return std::abs(d[x]) < std::abs(d[y]); });
  std::vector<long long> rank2(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && std::abs(d[idx[j]]) == std::abs(d[idx[i]])) ++j;
    const long long r2 = static_cast<long long>(i + 1 + j);  // 2 * mean of ranks i+1..j
    for (std::size_t k = i; k < j; ++k) rank2[idx[k]] = r2;
    i = j;
  }
  long long w_plus = 0;
  long long total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total += rank2[i];
    if (d[i] > 0) w_plus += rank2[i];
  }
  const long long t_obs = std::min(w_plus, total - w_plus);

  // prob[s] = P(sum of doubled ranks carrying a + sign equals s).
  std::vector<double> prob(total + 1, 0.0);
  prob[0] = 1.0;
  long long reach = 0;
  for (std::size_t i = 0; i < n; ++i) {
    reach += rank2[i];
    for (long long s = reach; s >= 0; --s) {
      const double keep = prob[s] * 0.5;
      const double add = s >= rank2[i] ? prob[s - rank2[i]] * 0.5 : 0.0;
      prob[s] = keep + add;
    }
  }
  double tail = 0.0;
  for (long long s = 0; s <= t_obs; ++s) tail += prob[s];
  return std::min(1.0, 2.0 * tail);
}

std::string feature_group(std::string_view span) {
  const auto dash = span.find('-');
  const std::string_view head = span.substr(0, dash);
  for (const char* g : kGroups) {
    if (head == g) return g;
  }
  throw DataError("unknown feature span '" + std::string(span) + "'");
}

GroupImportance aggregate_importance(std::span<const double> importance, const ColumnLayout& layout) {
  if (importance.size() != static_cast<std::size_t>(layout.width())) {
    throw DataError("importance length " + std::to_string(importance.size()) +
                    " does not match layout width " + std::to_string(layout.width()));
  }
  GroupImportance out;
  for (const char* g : kGroups) {
    double sum = 0.0;
    bool present = false;
    for (const auto& s : layout.spans) {
      if (feature_group(s.name) != g) continue;
      present = true;
      for (int j = s.offset; j < s.offset + s.width; ++j) sum += importance[j];
    }
    if (present) out.emplace_back(g, sum);
  }
  return out;
}

GroupImportance average_importance(const std::vector<GroupImportance>& runs) {
  GroupImportance out;
  if (runs.empty()) return out;
  for (const char* g : kGroups) {
    double sum = 0.0;
    bool present = false;
    for (const auto& r : runs) {
      for (const auto& [name, v] : r) {
        if (name != g) continue;
        sum += v;
        present = true;
      }
    }
    if (present) out.emplace_back(g, sum / static_cast<double>(runs.size()));
  }
  return out;
}

std::pair<double, double> mean_std(std::span<const double> v) {
  if (v.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= static_cast<double>(v.size());
  return {mean, std::sqrt(var)};
}

const SplitScores& EvalReport::split(std::string_view name) const {
  for (const auto& s : splits) {
    if (s.split == name) return s;
  }
  throw DataError("report has no split named '" + std::string(name) + "'");
}

std::string EvalReport::to_json() const {
  json j;
  j["format"] = "moltop-eval-report";
  j["version"] = kReportVersion;
  j["metric"] = std::string(to_string(metric));
  j["seeds"] = seeds;
  j["tasks"] = tasks;
  json sp = json::array();
  for (const auto& s : splits) {
    json per_task = json::array();
    for (const auto& row : s.per_task) {
      json r = json::array();
      for (const auto& v : row) r.push_back(v ? json(*v) : json(nullptr));
      per_task.push_back(r);
    }
    sp.push_back({{"split", s.split},
                  {"per_seed", s.per_seed},
                  {"per_task", per_task},
                  {"mean", s.mean()},
                  {"std", s.std()}});
  }
  j["splits"] = sp;
  return j.dump(2) + "\n";
}

EvalReport EvalReport::from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("format") != "moltop-eval-report") throw FormatError("eval report: wrong format tag");
    if (j.at("version").get<int>() > kReportVersion) throw VersionError("eval report: newer version");
    EvalReport r;
    r.metric = parse_metric(j.at("metric").get<std::string>());
    r.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    r.tasks = j.at("tasks").get<std::vector<std::string>>();
    for (const json& s : j.at("splits")) {
      SplitScores out;
      out.split = s.at("split").get<std::string>();
      out.per_seed = s.at("per_seed").get<std::vector<double>>();
      for (const json& row : s.at("per_task")) {
        std::vector<std::optional<double>> v;
        for (const json& x : row) v.push_back(x.is_null() ? std::nullopt : std::optional(x.get<double>()));
        out.per_task.push_back(std::move(v));
      }
      r.splits.push_back(std::move(out));
    }
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("eval report: ") + e.what());
  }
}

}  // namespace moltop
