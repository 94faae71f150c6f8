#include "fairpost/gbm.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairpost/error.h"
#include "fairpost/metrics.h"

namespace fairpost {

void GbmConfig::validate() const {
  if (n_estimators < 1) throw ValidationError("n_estimators must be at least 1");
  if (max_leaves < 2) throw ValidationError("max_leaves must be at least 2");
  if (max_depth < 1) throw ValidationError("max_depth must be at least 1");
  if (!(learning_rate > 0.0)) throw ValidationError("learning_rate must be positive");
  if (min_samples_leaf < 1) throw ValidationError("min_samples_leaf must be at least 1");
  if (!(lambda >= 0.0)) throw ValidationError("lambda must be nonnegative");
}

nlohmann::json GbmConfig::to_json() const {
  return {{"n_estimators", n_estimators}, {"max_leaves", max_leaves},
          {"max_depth", max_depth},       {"learning_rate", learning_rate},
          {"min_samples_leaf", min_samples_leaf}, {"lambda", lambda},
          {"seed", seed}};
}

GbmConfig GbmConfig::from_json(const nlohmann::json& j) {
  GbmConfig c;
  c.n_estimators = j.value("n_estimators", c.n_estimators);
  c.max_leaves = j.value("max_leaves", c.max_leaves);
  c.max_depth = j.value("max_depth", c.max_depth);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.min_samples_leaf = j.value("min_samples_leaf", c.min_samples_leaf);
  c.lambda = j.value("lambda", c.lambda);
  c.seed = j.value("seed", c.seed);
  c.validate();
  return c;
}

GbmModel::GbmModel(std::vector<std::string> names, double base_score, double learning_rate,
                   std::vector<std::vector<TreeNode>> trees)
    : names_(std::move(names)),
      base_score_(base_score),
      learning_rate_(learning_rate),
      trees_(std::move(trees)) {}

double GbmModel::predict_raw(std::span<const double> x) const {
  double f = base_score_;
  for (const auto& tree : trees_) {
    int k = 0;
    while (tree[static_cast<std::size_t>(k)].feature >= 0) {
      const auto& nd = tree[static_cast<std::size_t>(k)];
      k = x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
    }
    f += learning_rate_ * tree[static_cast<std::size_t>(k)].value;
  }
  return f;
}

double GbmModel::predict(std::span<const double> x) const { return sigmoid(predict_raw(x)); }

nlohmann::json GbmModel::to_json() const {
  auto trees = nlohmann::json::array();
  for (const auto& tree : trees_) {
    auto nodes = nlohmann::json::array();
    for (const auto& nd : tree)
      nodes.push_back({nd.feature, nd.threshold, nd.left, nd.right, nd.value});
    trees.push_back(std::move(nodes));
  }
  return {{"kind", "gbm"}, {"names", names_}, {"base_score", base_score_},
          {"learning_rate", learning_rate_}, {"trees", trees}};
}

GbmModel GbmModel::from_json(const nlohmann::json& j) {
  if (j.value("kind", "") != "gbm") throw ValidationError("not a gbm model file");
  std::vector<std::vector<TreeNode>> trees;
  for (const auto& t : j.at("trees")) {
    std::vector<TreeNode> nodes;
    for (const auto& n : t)
      nodes.push_back({n.at(0).get<int>(), n.at(1).get<double>(), n.at(2).get<int>(),
                       n.at(3).get<int>(), n.at(4).get<double>()});
    trees.push_back(std::move(nodes));
  }
  return GbmModel(j.at("names").get<std::vector<std::string>>(), j.at("base_score").get<double>(),
                  j.at("learning_rate").get<double>(), std::move(trees));
}

namespace {

struct Split {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
};

struct Leaf {
  int node = 0;
  int depth = 0;
  double sum_g = 0.0;
  double sum_h = 0.0;
  std::size_t count = 0;
  Split best;
};

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, const std::vector<std::vector<std::size_t>>& sorted,
              const GbmConfig& cfg)
      : data_(data), sorted_(sorted), cfg_(cfg), node_of_(data.rows()) {}

  std::vector<TreeNode> build(const std::vector<double>& g, const std::vector<double>& h) {
    std::vector<TreeNode> nodes(1);
    std::fill(node_of_.begin(), node_of_.end(), 0);
    Leaf root;
    for (std::size_t r = 0; r < g.size(); ++r) {
      root.sum_g += g[r];
      root.sum_h += h[r];
    }
    root.count = g.size();
    std::vector<Leaf> leaves{root};
    find_split(leaves[0], g, h);

    while (static_cast<int>(leaves.size()) < cfg_.max_leaves) {
      std::size_t pick = leaves.size();
      for (std::size_t k = 0; k < leaves.size(); ++k) {
        const auto& lf = leaves[k];
        if (lf.best.feature < 0 || lf.depth >= cfg_.max_depth) continue;
        if (pick == leaves.size() || lf.best.gain > leaves[pick].best.gain) pick = k;
      }
      if (pick == leaves.size()) break;
      Leaf parent = leaves[pick];
      const int li = static_cast<int>(nodes.size());
      nodes.resize(nodes.size() + 2);
      auto& pn = nodes[static_cast<std::size_t>(parent.node)];
      pn.feature = parent.best.feature;
      pn.threshold = parent.best.threshold;
      pn.left = li;
      pn.right = li + 1;
      Leaf left{li, parent.depth + 1, 0, 0, 0, {}};
      Leaf right{li + 1, parent.depth + 1, 0, 0, 0, {}};
      const auto f = static_cast<std::size_t>(parent.best.feature);
      for (std::size_t r = 0; r < node_of_.size(); ++r) {
        if (node_of_[r] != parent.node) continue;
        Leaf& side = data_.at(r, f) <= parent.best.threshold ? left : right;
        node_of_[r] = side.node;
        side.sum_g += g[r];
        side.sum_h += h[r];
        ++side.count;
      }
      find_split(left, g, h);
      find_split(right, g, h);
      leaves[pick] = left;
      leaves.push_back(right);
    }
    for (const auto& lf : leaves)
      nodes[static_cast<std::size_t>(lf.node)].value = -lf.sum_g / (lf.sum_h + cfg_.lambda);
    return nodes;
  }

  const std::vector<int>& node_of() const { return node_of_; }

 private:
  double score(double gs, double hs) const { return gs * gs / (hs + cfg_.lambda); }

  void find_split(Leaf& leaf, const std::vector<double>& g, const std::vector<double>& h) {
    leaf.best = {};
    const auto min_leaf = static_cast<std::size_t>(cfg_.min_samples_leaf);
    if (leaf.count < 2 * min_leaf || leaf.depth >= cfg_.max_depth) return;
    const double parent = score(leaf.sum_g, leaf.sum_h);
    for (std::size_t f = 0; f < data_.cols(); ++f) {
      double gl = 0.0, hl = 0.0;
      std::size_t nl = 0;
      double prev = 0.0;
      for (std::size_t r : sorted_[f]) {
        if (node_of_[r] != leaf.node) continue;
        const double v = data_.at(r, f);
        if (nl >= min_leaf && leaf.count - nl >= min_leaf && v > prev) {
          const double gain =
              0.5 * (score(gl, hl) + score(leaf.sum_g - gl, leaf.sum_h - hl) - parent);
          if (gain > leaf.best.gain + 1e-12) leaf.best = {gain, static_cast<int>(f), 0.5 * (prev + v)};
        }
        if (leaf.count - nl < min_leaf) break;
        gl += g[r];
        hl += h[r];
        ++nl;
        prev = v;
      }
    }
  }

  const Dataset& data_;
  const std::vector<std::vector<std::size_t>>& sorted_;
  const GbmConfig& cfg_;
  std::vector<int> node_of_;
};

}  // namespace

GbmModel train_gbm(const Dataset& data, const GbmConfig& config) {
  config.validate();
  const std::size_t n = data.rows();
  if (n == 0) throw ValidationError("cannot train on an empty dataset");
  double ybar = 0.0;
  for (int v : data.y()) ybar += v;
  ybar /= static_cast<double>(n);
  if (ybar == 0.0 || ybar == 1.0) throw ValidationError("training labels contain a single class");

  std::vector<std::vector<std::size_t>> sorted(data.cols());
  for (std::size_t f = 0; f < data.cols(); ++f) {
    sorted[f].resize(n);
    std::iota(sorted[f].begin(), sorted[f].end(), std::size_t{0});
    std::stable_sort(sorted[f].begin(), sorted[f].end(),
                     [&](auto a, auto b) { return data.at(a, f) < data.at(b, f); });
  }

  const double base = std::log(ybar / (1.0 - ybar));
  std::vector<double> raw(n, base), g(n), h(n), prob(n);
  std::vector<std::vector<TreeNode>> trees;
  std::vector<double> history;
  TreeBuilder builder(data, sorted, config);
  for (int t = 0; t < config.n_estimators; ++t) {
    for (std::size_t r = 0; r < n; ++r) {
      const double p = sigmoid(raw[r]);
      g[r] = p - data.y()[r];
      h[r] = p * (1.0 - p);
    }
    auto tree = builder.build(g, h);
    // Rows still sit in their final leaves, so the update needs no traversal.
    const auto& node_of = builder.node_of();
    for (std::size_t r = 0; r < n; ++r) {
      raw[r] += config.learning_rate * tree[static_cast<std::size_t>(node_of[r])].value;
      prob[r] = sigmoid(raw[r]);
    }
    history.push_back(log_loss(data.y(), prob));
    trees.push_back(std::move(tree));
  }
  GbmModel model(data.names(), base, config.learning_rate, std::move(trees));
  model.set_train_history(std::move(history));
  return model;
}

}  // namespace fairpost
