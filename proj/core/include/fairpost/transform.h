#ifndef FAIRPOST_TRANSFORM_H_
#define FAIRPOST_TRANSFORM_H_

// Compressive predictor transforms and the post-processed model
//
//   f~(x) = f(T_1(x_{i1}), ..., T_k(x_{ik}), x_{-M}),   f_bar = C o f~.
//
// Every transform is strictly increasing, fixes its focal point t*, reduces
// to the identity at a = 1 and contracts towards t* as a grows.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairpost/calibrate.h"
#include "fairpost/dataset.h"
#include "fairpost/model.h"

namespace fairpost {

enum class TransformKind { global, asymmetric, local };

std::string to_string(TransformKind kind);
TransformKind parse_transform_kind(const std::string& s);

// (t - t*)/a + t*.
double transform_global(double t, double a, double t_star);
// min(t-t*,0)/a_minus + max(t-t*,0)/a_plus + t*.
double transform_asymmetric(double t, double a_minus, double a_plus, double t_star);
// t - (t-t*)(1 - 1/a) exp(-(t-t*)^2 / (2 sigma^2)).
double transform_local(double t, double a, double sigma, double t_star);

// The local map stops being monotone near a ~ 0.309; smaller a are rejected.
inline constexpr double kLocalMinA = 0.4;

// d/dt of the local map.
double transform_local_derivative(double t, double a, double sigma, double t_star);

// Checks the local map's derivative on a 1000-point grid over [lo, hi];
// ValidationError when a < kLocalMinA or any derivative is not positive.
void certify_local_monotone(double a, double sigma, double t_star, double lo, double hi);

enum class FocalRule { mean, median, ks_argmax, fixed };

std::string to_string(FocalRule rule);
FocalRule parse_focal_rule(const std::string& s);

// Mean, median (inf-quantile at 1/2) or first maximizer of the KS gap between
// the G-classes of column i.
double focal_point(const Dataset& data, std::size_t i, FocalRule rule);

struct PredictorTransform {
  std::size_t index = 0;
  std::string name;
  TransformKind kind = TransformKind::global;
  double a = 1.0;  // global, local
  double a_minus = 1.0;  // asymmetric
  double a_plus = 1.0;
  double sigma = 1.0;  // local
  double focal = 0.0;
  FocalRule focal_rule = FocalRule::fixed;

  double operator()(double t) const;
  // Parameter validity (positivity, local lower bound).
  void validate() const;

  nlohmann::json to_json() const;
  static PredictorTransform from_json(const nlohmann::json& j);
};

struct CompressiveParams {
  std::vector<PredictorTransform> transforms;

  std::vector<std::size_t> indices() const;
  nlohmann::json to_json() const;
  static CompressiveParams from_json(const nlohmann::json& j);
};

class PostProcessedModel final : public Model {
 public:
  PostProcessedModel(std::shared_ptr<const Model> base, CompressiveParams params,
                     std::optional<CalibrationMap> calibration = std::nullopt);

  double predict(std::span<const double> x) const override;
  std::size_t num_features() const override { return base_->num_features(); }
  void predict_batch(std::span<const double> rows, std::span<double> out) const override;

  // f~ without the calibration step.
  double predict_uncalibrated(std::span<const double> x) const;
  std::vector<double> predict_uncalibrated(const Dataset& data) const;

  // Inputs after the per-coordinate transforms.
  std::vector<double> transform_rows(std::span<const double> rows) const;

  const Model& base() const { return *base_; }
  const CompressiveParams& params() const { return params_; }
  const std::optional<CalibrationMap>& calibration() const { return calibration_; }
  PostProcessedModel with_calibration(std::optional<CalibrationMap> calibration) const;

 private:
  std::shared_ptr<const Model> base_;
  CompressiveParams params_;
  std::optional<CalibrationMap> calibration_;
};

// Requires the transform indices to match `impact` exactly (as sets, no
// duplicates); local transforms are certified on the data range when `data`
// is given.
PostProcessedModel build_postprocessed(std::shared_ptr<const Model> base,
                                       std::span<const std::size_t> impact,
                                       CompressiveParams params, const Dataset* data = nullptr);

}  // namespace fairpost

#endif  // FAIRPOST_TRANSFORM_H_
