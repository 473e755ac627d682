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

#include "moltop/forest.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "moltop/error.hpp"
#include "moltop/parallel.hpp"

namespace moltop {
namespace {

constexpr int kFormatVersion = 1;
constexpr const char* kMagic = "moltop-forest";

// Gains below this are treated as "no improvement".
constexpr double kMinGain = 1e-12;

std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Impurity of a binary node with `pos` positives out of `total` weight.
double impurity(SplitCriterion c, double pos, double total) noexcept {
  if (total <= 0.0 || pos <= 0.0 || pos >= total) return 0.0;
  const double q = pos / total;
  if (c == SplitCriterion::Gini) return 2.0 * q * (1.0 - q);
  return -(q * std::log2(q) + (1.0 - q) * std::log2(1.0 - q));
}

struct Split {
  bool found = false;
  double score = 0.0;  // weighted child impurity sum; lower is better
  int feature = -1;
  double threshold = 0.0;
};

// Rank of every training value among the distinct values of its feature,
// computed once and shared by all trees. Split search works on ranks.
struct RankedFeatures {
  std::size_t rows = 0;
  std::vector<std::uint32_t> code;          // column-major: code[f * rows + i]
  std::vector<std::vector<double>> values;  // distinct sorted values per feature

  RankedFeatures(std::span<const double> x, std::size_t n, std::size_t cols, int workers)
      : rows(n), code(n * cols), values(cols) {
    parallel_for(cols, workers, [&](std::size_t f) {
      std::vector<double>& v = values[f];
      v.resize(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = x[i * cols + f];
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
      for (std::size_t i = 0; i < n; ++i) {
        code[f * n + i] = static_cast<std::uint32_t>(
            std::lower_bound(v.begin(), v.end(), x[i * cols + f]) - v.begin());
      }
    });
  }
};

class TreeBuilder {
 public:
  TreeBuilder(std::span<const double> x, const RankedFeatures& ranked, std::size_t cols,
              const std::vector<std::uint8_t>& y, std::size_t tasks, const ForestConfig& cfg,
              std::uint64_t seed)
      : x_(x), ranked_(ranked), rows_(ranked.rows), cols_(cols), y_(y), tasks_(tasks), cfg_(cfg),
        rng_(seed) {
    max_features_ = cfg.max_features
                        ? std::clamp<int>(*cfg.max_features, 1, static_cast<int>(cols))
                        : std::max(1, static_cast<int>(std::floor(std::sqrt(double(cols)))));
    features_.resize(cols);
    std::iota(features_.begin(), features_.end(), 0);
  }

  Tree build() {
    weight_.assign(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i) ++weight_[bounded_draw(rng_, rows_)];
    samples_.clear();
    for (std::size_t i = 0; i < rows_; ++i) {
      if (weight_[i] > 0) samples_.push_back(static_cast<int>(i));
    }

    struct Pending {
      int node;
      std::size_t begin, end;
      int depth;
    };
    std::vector<Pending> stack;
    tree_.nodes.emplace_back();
    stack.push_back({0, 0, samples_.size(), 0});
    std::vector<double> pos(tasks_);
    while (!stack.empty()) {
      const Pending p = stack.back();
      stack.pop_back();

      double total = 0.0;
      std::fill(pos.begin(), pos.end(), 0.0);
      for (std::size_t k = p.begin; k < p.end; ++k) {
        const int s = samples_[k];
        total += weight_[s];
        for (std::size_t t = 0; t < tasks_; ++t) pos[t] += weight_[s] * y_[s * tasks_ + t];
      }
      tree_.nodes[p.node].samples = static_cast<std::uint32_t>(total);
      const double parent = node_impurity(pos, total);
      const std::size_t n = p.end - p.begin;
      bool pure = true;
      for (std::size_t t = 0; t < tasks_ && pure; ++t) pure = pos[t] == 0.0 || pos[t] == total;

      Split best;
      if (!pure && n >= static_cast<std::size_t>(cfg_.min_samples_split) &&
          n >= 2 * static_cast<std::size_t>(cfg_.min_samples_leaf) &&
          (!cfg_.max_depth || p.depth < *cfg_.max_depth)) {
        best = find_split(p.begin, p.end, pos, total);
      }
      const double gain = best.found ? total * parent - best.score : 0.0;
      if (!best.found || gain <= kMinGain) {
        make_leaf(p.node, pos);
        continue;
      }

      auto mid = std::stable_partition(
          samples_.begin() + p.begin, samples_.begin() + p.end,
          [&](int s) { return x_[s * cols_ + best.feature] <= best.threshold; });
      const std::size_t split_at = static_cast<std::size_t>(mid - samples_.begin());
      const int left = static_cast<int>(tree_.nodes.size());
      tree_.nodes.emplace_back();
      tree_.nodes.emplace_back();
      TreeNode& node = tree_.nodes[p.node];
      node.feature = best.feature;
      node.threshold = best.threshold;
      node.left = left;
      node.right = left + 1;
      node.gain = gain;
      stack.push_back({left + 1, split_at, p.end, p.depth + 1});
      stack.push_back({left, p.begin, split_at, p.depth + 1});
    }
    // Leaf counts in node order, the layout load() reproduces.
    std::vector<std::uint32_t> ordered;
    ordered.reserve(tree_.positives.size());
    for (TreeNode& node : tree_.nodes) {
      if (!node.is_leaf()) continue;
      const int at = static_cast<int>(ordered.size());
      ordered.insert(ordered.end(), tree_.positives.begin() + node.leaf,
                     tree_.positives.begin() + node.leaf + tasks_);
      node.leaf = at;
    }
    tree_.positives = std::move(ordered);
    return std::move(tree_);
  }

 private:
  double node_impurity(const std::vector<double>& pos, double total) const {
    double s = 0.0;
    for (double p : pos) s += impurity(cfg_.criterion, p, total);
    return s / static_cast<double>(tasks_);
  }

  void make_leaf(int id, const std::vector<double>& pos) {
    TreeNode& node = tree_.nodes[id];
    node.leaf = static_cast<int>(tree_.positives.size());
    for (double p : pos) tree_.positives.push_back(static_cast<std::uint32_t>(p));
  }

  // Collapses the node's samples into groups of equal value of feature f,
  // ordered by value: group code, distinct sample count, weight, positives.
  void group_by_value(int f, std::size_t begin, std::size_t end) {
    const std::uint32_t* code = &ranked_.code[static_cast<std::size_t>(f) * rows_];
    const std::size_t d = ranked_.values[f].size();
    const std::size_t n = end - begin;
    gcode_.clear();
    gcount_.clear();
    gweight_.clear();
    gpos_.clear();
    if (d <= n) {
      // Few distinct values: a counting pass over ranks.
      bcount_.assign(d, 0);
      bweight_.assign(d, 0.0);
      bpos_.assign(d * tasks_, 0.0);
      for (std::size_t k = begin; k < end; ++k) {
        const int s = samples_[k];
        const std::uint32_t c = code[s];
        ++bcount_[c];
        bweight_[c] += weight_[s];
        for (std::size_t t = 0; t < tasks_; ++t) bpos_[c * tasks_ + t] += weight_[s] * y_[s * tasks_ + t];
      }
      for (std::size_t c = 0; c < d; ++c) {
        if (bcount_[c] == 0) continue;
        gcode_.push_back(static_cast<std::uint32_t>(c));
        gcount_.push_back(bcount_[c]);
        gweight_.push_back(bweight_[c]);
        gpos_.insert(gpos_.end(), bpos_.begin() + c * tasks_, bpos_.begin() + (c + 1) * tasks_);
      }
      return;
    }
    keys_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const int s = samples_[begin + k];
      keys_[k] = (static_cast<std::uint64_t>(code[s]) << 32) | static_cast<std::uint32_t>(s);
    }
    std::sort(keys_.begin(), keys_.end());
    for (std::size_t k = 0; k < n; ++k) {
      const auto c = static_cast<std::uint32_t>(keys_[k] >> 32);
      const auto s = static_cast<std::size_t>(keys_[k] & 0xFFFFFFFFu);
      if (gcode_.empty() || gcode_.back() != c) {
        gcode_.push_back(c);
        gcount_.push_back(0);
        gweight_.push_back(0.0);
        gpos_.resize(gpos_.size() + tasks_, 0.0);
      }
      ++gcount_.back();
      gweight_.back() += weight_[s];
      double* gp = &gpos_[gpos_.size() - tasks_];
      for (std::size_t t = 0; t < tasks_; ++t) gp[t] += weight_[s] * y_[s * tasks_ + t];
    }
  }

  Split find_split(std::size_t begin, std::size_t end, const std::vector<double>& pos,
                   double total) {
    Split best;
    const std::size_t n = end - begin;
    left_pos_.resize(tasks_);
    int visited = 0;
    for (std::size_t k = 0; k < cols_ && visited < max_features_; ++k) {
      std::swap(features_[k], features_[k + bounded_draw(rng_, cols_ - k)]);
      const int f = features_[k];
      group_by_value(f, begin, end);
      const std::size_t groups = gcode_.size();
      if (groups < 2) continue;  // constant in this node; does not count
      ++visited;
      const std::vector<double>& vals = ranked_.values[f];

      std::fill(left_pos_.begin(), left_pos_.end(), 0.0);
      double left_w = 0.0;
      std::size_t nl = 0;
      for (std::size_t g = 0; g + 1 < groups; ++g) {
        left_w += gweight_[g];
        nl += gcount_[g];
        for (std::size_t t = 0; t < tasks_; ++t) left_pos_[t] += gpos_[g * tasks_ + t];
        if (nl < static_cast<std::size_t>(cfg_.min_samples_leaf) ||
            n - nl < static_cast<std::size_t>(cfg_.min_samples_leaf)) {
          continue;
        }
        const double right_w = total - left_w;
        double il = 0.0;
        double ir = 0.0;
        for (std::size_t t = 0; t < tasks_; ++t) {
          il += impurity(cfg_.criterion, left_pos_[t], left_w);
          ir += impurity(cfg_.criterion, pos[t] - left_pos_[t], right_w);
        }
        const double score = (left_w * il + right_w * ir) / static_cast<double>(tasks_);
        const double lo = vals[gcode_[g]];
        const double hi = vals[gcode_[g + 1]];
        double thr = lo + (hi - lo) / 2.0;
        if (!(thr < hi)) thr = lo;
        const bool better =
            !best.found || score < best.score ||
            (score == best.score &&
             (f < best.feature || (f == best.feature && thr < best.threshold)));
        if (better) best = {true, score, f, thr};
      }
    }
    return best;
  }

  std::span<const double> x_;
  const RankedFeatures& ranked_;
  std::size_t rows_, cols_;
  const std::vector<std::uint8_t>& y_;
  std::size_t tasks_;
  const ForestConfig& cfg_;
  std::mt19937_64 rng_;
  int max_features_;
  std::vector<int> features_;
  std::vector<std::uint32_t> weight_;
  std::vector<int> samples_;
  Tree tree_;

  // Scratch buffers reused across nodes.
  std::vector<std::uint32_t> gcode_, gcount_, bcount_;
  std::vector<double> gweight_, gpos_, bweight_, bpos_, left_pos_;
  std::vector<std::uint64_t> keys_;
};

double leaf_fraction(const Tree& tree, const TreeNode& leaf, std::size_t t) {
  return static_cast<double>(tree.positives[leaf.leaf + t]) / static_cast<double>(leaf.samples);
}

const TreeNode& descend(const Tree& tree, const double* row) {
  const TreeNode* node = &tree.nodes[0];
  while (!node->is_leaf()) {
    node = &tree.nodes[row[node->feature] <= node->threshold ? node->left : node->right];
  }
  return *node;
}

std::string real_str(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

ForestConfig ForestConfig::untuned(std::uint64_t seed) {
  ForestConfig c;
  c.n_trees = 100;
  c.min_samples_split = 2;
  c.criterion = SplitCriterion::Gini;
  c.seed = seed;
  return c;
}

std::uint64_t tree_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(seed ^ splitmix64(index));
}

std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw DataError("bounded_draw with empty range");
  const std::uint64_t limit = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= limit) return r % n;
  }
}

Forest Forest::train(std::span<const double> x, std::size_t rows, std::size_t cols,
                     const LabelMatrix& y, const ForestConfig& config, int workers) {
  if (config.n_trees < 1) throw DataError("n_trees must be at least 1");
  if (config.min_samples_split < 2) throw DataError("min_samples_split must be at least 2");
  if (config.min_samples_leaf < 1) throw DataError("min_samples_leaf must be at least 1");
  if (x.size() != rows * cols) throw DataError("feature matrix size does not match its shape");
  if (y.rows != rows) {
    throw DataError("label rows (" + std::to_string(y.rows) + ") do not match feature rows (" +
                    std::to_string(rows) + ")");
  }
  if (y.tasks < 1) throw DataError("at least one task is required");
  if (rows == 0) throw DataError("cannot train on zero rows");
  if (cols == 0) throw DataError("cannot train on zero features");

  std::vector<std::uint8_t> labels(rows * y.tasks, 0);
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (y.missing[k]) continue;  // missing labels become 0
    const double v = y.values[k];
    if (v != 0.0 && v != 1.0) {
      throw DataError("non-binary label " + real_str(v) + " at row " +
                      std::to_string(k / y.tasks) + ", task " + std::to_string(k % y.tasks));
    }
    labels[k] = static_cast<std::uint8_t>(v);
  }

  Forest f;
  f.n_features_ = cols;
  f.n_tasks_ = y.tasks;
  f.config_ = config;
  f.trees_.resize(config.n_trees);
  const RankedFeatures ranked(x, rows, cols, workers);
  parallel_for(config.n_trees, workers, [&](std::size_t t) {
    TreeBuilder b(x, ranked, cols, labels, y.tasks, config, tree_seed(config.seed, t));
    f.trees_[t] = b.build();
  });
  return f;
}

std::vector<double> Forest::predict_proba(std::span<const double> x, std::size_t rows,
                                          int workers) const {
  if (trees_.empty()) throw DataError("forest has no trees");
  if (x.size() != rows * n_features_) {
    throw DataError("feature width does not match the forest (" + std::to_string(n_features_) +
                    " features expected)");
  }
  std::vector<double> out(rows * n_tasks_, 0.0);
  const double inv = 1.0 / static_cast<double>(trees_.size());
  // Row blocks keep per-task overhead small while staying order-independent.
  constexpr std::size_t kBlock = 64;
  const std::size_t blocks = (rows + kBlock - 1) / kBlock;
  parallel_for(blocks, workers, [&](std::size_t b) {
    const std::size_t end = std::min(rows, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      double* acc = &out[i * n_tasks_];
      for (const Tree& tree : trees_) {
        const TreeNode& leaf = descend(tree, &x[i * n_features_]);
        for (std::size_t t = 0; t < n_tasks_; ++t) acc[t] += leaf_fraction(tree, leaf, t);
      }
      for (std::size_t t = 0; t < n_tasks_; ++t) acc[t] *= inv;
    }
  });
  return out;
}

std::vector<double> Forest::predict_proba(const FeatureMatrix& x, int workers) const {
  return predict_proba(x.values, x.rows, workers);
}

std::vector<double> Forest::feature_importance() const {
  std::vector<double> total(n_features_, 0.0);
  std::vector<double> per(n_features_);
  for (const Tree& tree : trees_) {
    std::fill(per.begin(), per.end(), 0.0);
    double sum = 0.0;
    for (const TreeNode& node : tree.nodes) {
      if (node.is_leaf()) continue;
      per[node.feature] += node.gain;
      sum += node.gain;
    }
    if (sum <= 0.0) continue;
    for (std::size_t j = 0; j < n_features_; ++j) total[j] += per[j] / sum;
  }
  const double s = std::accumulate(total.begin(), total.end(), 0.0);
  if (s > 0.0) {
    for (double& v : total) v /= s;
  }
  return total;
}

void Forest::merge(const Forest& other) {
  if (other.n_features_ != n_features_ || other.n_tasks_ != n_tasks_) {
    throw DataError("cannot merge forests of different shapes");
  }
  trees_.insert(trees_.end(), other.trees_.begin(), other.trees_.end());
  config_.n_trees = static_cast<int>(trees_.size());
}

std::string Forest::save() const {
  std::ostringstream out;
  out << kMagic << '\n';
  out << "version " << kFormatVersion << '\n';
  out << "n_trees " << trees_.size() << '\n';
  out << "min_samples_split " << config_.min_samples_split << '\n';
  out << "min_samples_leaf " << config_.min_samples_leaf << '\n';
  out << "max_features " << (config_.max_features ? std::to_string(*config_.max_features) : "sqrt")
      << '\n';
  out << "max_depth " << (config_.max_depth ? std::to_string(*config_.max_depth) : "none") << '\n';
  out << "seed " << config_.seed << '\n';
  out << "criterion " << (config_.criterion == SplitCriterion::Gini ? "gini" : "entropy") << '\n';
  out << "n_features " << n_features_ << '\n';
  out << "n_tasks " << n_tasks_ << '\n';
  for (std::size_t k = 0; k < trees_.size(); ++k) {
    const Tree& tree = trees_[k];
    out << "tree " << k << ' ' << tree.nodes.size() << '\n';
    for (const TreeNode& node : tree.nodes) {
      if (node.is_leaf()) {
        out << "L " << node.samples;
        for (std::size_t t = 0; t < n_tasks_; ++t) out << ' ' << tree.positives[node.leaf + t];
      } else {
        out << "S " << node.feature << ' ' << real_str(node.threshold) << ' ' << node.left << ' '
            << node.right << ' ' << real_str(node.gain) << ' ' << node.samples;
      }
      out << '\n';
    }
  }
  out << "end\n";
  return out.str();
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  std::istringstream next() {
    if (pos_ >= text_.size()) throw FormatError("forest: truncated payload (missing end marker)");
    const std::size_t nl = text_.find('\n', pos_);
    if (nl == std::string_view::npos) throw FormatError("forest: truncated payload (unterminated line)");
    std::istringstream line{std::string(text_.substr(pos_, nl - pos_))};
    pos_ = nl + 1;
    ++line_no_;
    return line;
  }

  // Reads "<key> <value>" and returns the value token.
  std::string field(const char* key) {
    auto line = next();
    std::string k, v;
    if (!(line >> k >> v) || k != key) fail(std::string("expected field '") + key + "'");
    return v;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw FormatError("forest: " + what + " on line " + std::to_string(line_no_));
  }

  std::size_t remaining() const { return text_.size() - pos_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_no_ = 0;
};

long long parse_int(LineReader& r, const std::string& s) {
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (errno || end == s.c_str() || *end) r.fail("bad integer '" + s + "'");
  return v;
}

double parse_real(LineReader& r, const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end) r.fail("bad real '" + s + "'");
  return v;
}

}  // namespace

Forest Forest::load(std::string_view text) {
  LineReader r(text);
  {
    auto line = r.next();
    std::string magic;
    if (!(line >> magic) || magic != kMagic) r.fail("bad magic");
  }
  const long long version = parse_int(r, r.field("version"));
  if (version > kFormatVersion) {
    throw VersionError("forest: format version " + std::to_string(version) +
                       " is newer than supported version " + std::to_string(kFormatVersion));
  }
  if (version < 1) r.fail("bad version");

  Forest f;
  ForestConfig& c = f.config_;
  const long long n_trees = parse_int(r, r.field("n_trees"));
  c.n_trees = static_cast<int>(n_trees);
  c.min_samples_split = static_cast<int>(parse_int(r, r.field("min_samples_split")));
  c.min_samples_leaf = static_cast<int>(parse_int(r, r.field("min_samples_leaf")));
  const std::string mf = r.field("max_features");
  if (mf != "sqrt") c.max_features = static_cast<int>(parse_int(r, mf));
  const std::string md = r.field("max_depth");
  if (md != "none") c.max_depth = static_cast<int>(parse_int(r, md));
  {
    const std::string s = r.field("seed");
    char* end = nullptr;
    errno = 0;
    c.seed = std::strtoull(s.c_str(), &end, 10);
    if (errno || *end) r.fail("bad seed");
  }
  const std::string crit = r.field("criterion");
  if (crit == "gini") {
    c.criterion = SplitCriterion::Gini;
  } else if (crit != "entropy") {
    r.fail("unknown criterion '" + crit + "'");
  }
  const long long nf = parse_int(r, r.field("n_features"));
  const long long nt = parse_int(r, r.field("n_tasks"));
  if (n_trees < 1 || nf < 1 || nt < 1) r.fail("non-positive shape");
  f.n_features_ = static_cast<std::size_t>(nf);
  f.n_tasks_ = static_cast<std::size_t>(nt);

  f.trees_.resize(n_trees);
  for (long long k = 0; k < n_trees; ++k) {
    auto header = r.next();
    std::string tag;
    long long idx = -1, n_nodes = -1;
    if (!(header >> tag >> idx >> n_nodes) || tag != "tree" || idx != k || n_nodes < 1) {
      r.fail("bad tree header");
    }
    // Every node takes at least two bytes, which bounds the allocation.
    if (static_cast<std::size_t>(n_nodes) > r.remaining()) r.fail("node count exceeds payload");
    Tree& tree = f.trees_[k];
    tree.nodes.resize(n_nodes);
    for (long long i = 0; i < n_nodes; ++i) {
      auto line = r.next();
      std::string kind;
      line >> kind;
      TreeNode& node = tree.nodes[i];
      if (kind == "L") {
        long long samples = -1;
        if (!(line >> samples) || samples < 1) r.fail("bad leaf");
        node.samples = static_cast<std::uint32_t>(samples);
        node.leaf = static_cast<int>(tree.positives.size());
        for (long long t = 0; t < nt; ++t) {
          long long p = -1;
          if (!(line >> p) || p < 0 || p > samples) r.fail("bad leaf count");
          tree.positives.push_back(static_cast<std::uint32_t>(p));
        }
      } else if (kind == "S") {
        std::string thr, gain;
        long long feat = -1, left = -1, right = -1, samples = -1;
        if (!(line >> feat >> thr >> left >> right >> gain >> samples)) r.fail("bad split");
        if (feat < 0 || feat >= nf) r.fail("split feature out of range");
        if (left <= i || right <= i || left >= n_nodes || right >= n_nodes) r.fail("bad child index");
        node.feature = static_cast<int>(feat);
        node.threshold = parse_real(r, thr);
        node.left = static_cast<int>(left);
        node.right = static_cast<int>(right);
        node.gain = parse_real(r, gain);
        node.samples = static_cast<std::uint32_t>(samples);
      } else {
        r.fail("unknown node kind '" + kind + "'");
      }
      std::string extra;
      if (line >> extra) r.fail("trailing data");
    }
  }
  auto trailer = r.next();
  std::string end;
  if (!(trailer >> end) || end != "end") r.fail("missing end marker");
  return f;
}

}  // namespace moltop
