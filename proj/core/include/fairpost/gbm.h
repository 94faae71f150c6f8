#ifndef FAIRPOST_GBM_H_
#define FAIRPOST_GBM_H_

// Gradient-boosted regression trees for the logistic loss. Each tree is grown
// best-first on exact splits over presorted columns and its leaves take the
// regularized Newton value -sum(g) / (sum(h) + lambda).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairpost/dataset.h"
#include "fairpost/model.h"

namespace fairpost {

struct GbmConfig {
  int n_estimators = 150;
  int max_leaves = 8;
  int max_depth = 3;
  double learning_rate = 0.1;
  int min_samples_leaf = 50;
  double lambda = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
  nlohmann::json to_json() const;
  static GbmConfig from_json(const nlohmann::json& j);
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // x[feature] <= threshold goes left
  int left = -1;
  int right = -1;
  double value = 0.0;
};

class GbmModel final : public Model {
 public:
  GbmModel(std::vector<std::string> names, double base_score, double learning_rate,
           std::vector<std::vector<TreeNode>> trees);

  double predict(std::span<const double> x) const override;
  std::size_t num_features() const override { return names_.size(); }

  // Log-odds before the sigmoid.
  double predict_raw(std::span<const double> x) const;

  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::vector<TreeNode>>& trees() const { return trees_; }
  double base_score() const { return base_score_; }

  // Training log-loss after each boosting round (empty for loaded models).
  const std::vector<double>& train_history() const { return history_; }
  void set_train_history(std::vector<double> h) { history_ = std::move(h); }

  nlohmann::json to_json() const;
  static GbmModel from_json(const nlohmann::json& j);

 private:
  std::vector<std::string> names_;
  double base_score_;
  double learning_rate_;
  std::vector<std::vector<TreeNode>> trees_;
  std::vector<double> history_;
};

// Trains on (X, Y); G is never read. ValidationError on single-class Y.
GbmModel train_gbm(const Dataset& data, const GbmConfig& config = {});

}  // namespace fairpost

#endif  // FAIRPOST_GBM_H_
