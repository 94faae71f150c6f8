#ifndef FAIRPOST_MITIGATE_H_
#define FAIRPOST_MITIGATE_H_

// Bias-performance frontier search. A parameter vector gamma is mapped to a
// model, scored on a holdout split with
//
//   L(gamma, omega) = log_loss + omega * Bias,
//
// seeded with uniform prior draws and refined per omega by TPE proposals.
// Every visited gamma is finally scored on the test split and the
// nondominated (bias, loss) points form the frontier.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairpost/bias.h"
#include "fairpost/dataset.h"
#include "fairpost/gbm.h"
#include "fairpost/model.h"
#include "fairpost/pareto.h"
#include "fairpost/tpe.h"
#include "fairpost/transform.h"

namespace fairpost {

// Search bounds for one transformed predictor. The focal point is fixed at
// the rule's value on the holdout split unless focal bounds are given.
struct TransformSpec {
  std::size_t index = 0;
  TransformKind kind = TransformKind::global;
  double a_lo = 0.5;
  double a_hi = 2.0;
  double sigma_lo = 1.0;
  double sigma_hi = 2.0;
  FocalRule focal_rule = FocalRule::mean;
  std::optional<double> focal_lo;
  std::optional<double> focal_hi;

  nlohmann::json to_json() const;
};

struct SearchSettings {
  std::vector<double> omegas;
  int n_prior = 400;
  int n_bo = 50;
  std::uint64_t seed = 0;
  TpeOptions tpe;
  bool convex_envelope = false;

  void validate() const;
  nlohmann::json to_json() const;
};

// omega_j = 2 j / 20 for j = 0..20.
std::vector<double> default_omegas();

struct SearchSpace {
  std::vector<TransformSpec> transforms;
  SearchSettings settings;
  // Fit the link-space calibration on the holdout split.
  bool calibrate = true;
};

struct Metrics {
  double loss = 0.0;
  double bias = 0.0;
  bool calibration_failed = false;
};

struct FrontierPoint {
  nlohmann::json gamma;
  // NaN for prior draws.
  double omega = std::numeric_limits<double>::quiet_NaN();
  std::string source;  // "prior" or "bo"
  Metrics holdout;
  Metrics test;
  bool duplicate = false;  // same gamma as an earlier point
};

struct Frontier {
  std::vector<FrontierPoint> points;
  // Nondominated among distinct gammas, on the test split.
  std::vector<std::size_t> frontier_indices;
  std::vector<std::size_t> envelope_indices;
  std::vector<std::string> warnings;
  nlohmann::json manifest;

  bool on_frontier(std::size_t i) const;
  // omega,bias,loss,dominated_flag,gamma_json (test split).
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

// Holdout/test objective for the post-processed family of one base model.
class PostProcessObjective {
 public:
  PostProcessObjective(std::shared_ptr<const Model> base, const Dataset& holdout,
                       const Dataset& test, CellRows holdout_cells, CellRows test_cells,
                       int favorable_sign, bool calibrate);

  // Post-processed model with its calibration fitted on the holdout split;
  // the calibration is left off (and flagged) when it fails.
  std::pair<PostProcessedModel, bool> build(const CompressiveParams& params) const;

  Metrics evaluate_holdout(const CompressiveParams& params) const;
  Metrics evaluate_test(const CompressiveParams& params) const;
  // log_loss + omega * bias on the holdout split.
  double objective(const CompressiveParams& params, double omega) const;

  Metrics base_holdout() const;
  Metrics base_test() const;

 private:
  Metrics score(const Model& model, const Dataset& split, const CellRows& cells) const;

  std::shared_ptr<const Model> base_;
  const Dataset& holdout_;
  const Dataset& test_;
  CellRows holdout_cells_;
  CellRows test_cells_;
  int sign_;
  bool calibrate_;
  std::vector<double> base_holdout_scores_;
};

// Maps a point of the search box to transform parameters.
class ParamCodec {
 public:
  ParamCodec(std::vector<TransformSpec> specs, const Dataset& reference);

  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }
  CompressiveParams decode(std::span<const double> x) const;
  const std::vector<std::size_t>& indices() const { return indices_; }

 private:
  std::vector<TransformSpec> specs_;
  std::vector<std::string> names_;
  std::vector<double> focal_;
  std::vector<double> lo_;
  std::vector<double> hi_;
  std::vector<std::size_t> indices_;
};

struct SearchTrace {
  std::vector<std::vector<double>> xs;
  std::vector<double> omega;
  std::vector<Metrics> holdout;
  std::vector<Metrics> test;
  int surrogate_fallbacks = 0;
};

// The prior + per-omega TPE loop over an arbitrary box. `evaluate` returns
// (holdout, test) metrics; only the holdout values steer the search.
SearchTrace run_search(const std::vector<double>& lo, const std::vector<double>& hi,
                       const std::function<std::pair<Metrics, Metrics>(std::span<const double>)>& evaluate,
                       const SearchSettings& settings);

struct DataSplits {
  const Dataset* train = nullptr;
  const Dataset* holdout = nullptr;
  const Dataset* test = nullptr;
};

Frontier run_algorithm1(std::shared_ptr<const Model> base, const DataSplits& splits,
                        const PartitionSpec& partition, int favorable_sign,
                        const SearchSpace& space);

struct GbmBounds {
  int n_estimators_lo = 40, n_estimators_hi = 250;
  int max_leaves_lo = 4, max_leaves_hi = 20;
  int max_depth_lo = 2, max_depth_hi = 20;
  double learning_rate_lo = 0.05, learning_rate_hi = 0.5;
  int min_samples_leaf = 50;

  nlohmann::json to_json() const;
};

struct BaselineResult {
  Frontier frontier;
  GbmConfig best_config;
  std::shared_ptr<const GbmModel> best_model;
};

// Same loop with gamma = GBM hyperparameters; every evaluation retrains on
// the train split. The best model is the minimum-holdout-loss configuration
// among the points searched at omega = 0 (prior included).
BaselineResult run_hyperparam_baseline(const DataSplits& splits, const GbmBounds& bounds,
                                       const PartitionSpec& partition, int favorable_sign,
                                       const SearchSettings& settings);

GbmConfig decode_gbm(std::span<const double> x, const GbmBounds& bounds);

}  // namespace fairpost

#endif  // FAIRPOST_MITIGATE_H_
