#ifndef FAIRPOST_CALIBRATE_H_
#define FAIRPOST_CALIBRATE_H_

// Monotone recalibration of a post-processed score: isotonic regression
// (PAVA), a one-dimensional logistic refit on the labels, and a linear fit in
// logit space against the base model's scores.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairpost/error.h"

namespace fairpost {

enum class CalibrationKind { pava, logistic_refit, link_linear };

std::string to_string(CalibrationKind kind);
CalibrationKind parse_calibration_kind(const std::string& s);

class CalibrationMap {
 public:
  // Step map through sorted knots; values below the first knot take the first
  // level, values between knots the level of the knot at or below.
  static CalibrationMap step(std::vector<double> knots, std::vector<double> levels);
  // s -> sigmoid(b0 + b1 * logit(s)) with s clamped by kProbClamp.
  static CalibrationMap logit_linear(CalibrationKind kind, double b0, double b1);

  CalibrationKind kind() const { return kind_; }
  double operator()(double s) const;
  void apply(std::span<double> scores) const;

  double intercept() const { return b0_; }
  double slope() const { return b1_; }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& levels() const { return levels_; }

  nlohmann::json to_json() const;
  static CalibrationMap from_json(const nlohmann::json& j);

 private:
  CalibrationKind kind_ = CalibrationKind::link_linear;
  double b0_ = 0.0;
  double b1_ = 1.0;
  std::vector<double> knots_;
  std::vector<double> levels_;
};

// Raised when link-space regression loses monotonicity (slope <= 0) or the
// post-processed scores carry no variation.
class CalibrationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Weighted least-squares nondecreasing fit of y in the given order. Returns
// one level per input.
std::vector<double> isotonic_fit(std::span<const double> y,
                                 std::optional<std::span<const double>> weights = std::nullopt);

// Isotonic regression of y on x. Tied x values are pooled first.
CalibrationMap pava_isotonic(std::span<const double> x, std::span<const double> y,
                             std::optional<std::span<const double>> weights = std::nullopt);

// logit(base) ~ b0 + b1 * logit(post) by least squares. Throws CalibrationError
// when b1 <= 0 or logit(post) is constant.
CalibrationMap link_linear_calibrate(std::span<const double> post_scores,
                                     std::span<const double> base_scores);

struct LogisticRefit {
  CalibrationMap map;
  bool fallback = false;
  std::vector<std::string> warnings;
};

// P(Y=1 | score) = sigmoid(b0 + b1 * logit(score)) by Newton iterations.
// Separation or single-class labels switch to a ridge-penalized fit.
LogisticRefit logistic_refit(std::span<const double> post_scores, std::span<const int> y);

// Mann-Whitney AUC with half credit for ties. Needs both label values.
double auc(std::span<const double> scores, std::span<const int> labels);

}  // namespace fairpost

#endif  // FAIRPOST_CALIBRATE_H_
