#include "fairpost/transform.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "fairpost/empirical.h"
#include "fairpost/error.h"

namespace fairpost {

std::string to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::global: return "global";
    case TransformKind::asymmetric: return "asymmetric";
    case TransformKind::local: return "local";
  }
  return "?";
}

TransformKind parse_transform_kind(const std::string& s) {
  if (s == "global") return TransformKind::global;
  if (s == "asymmetric") return TransformKind::asymmetric;
  if (s == "local") return TransformKind::local;
  throw ValidationError("unknown transform kind '" + s + "'");
}

double transform_global(double t, double a, double t_star) {
  if (!(a > 0.0)) throw ValidationError("compression parameter a must be positive");
  if (a == 1.0) return t;
  return (t - t_star) / a + t_star;
}

double transform_asymmetric(double t, double a_minus, double a_plus, double t_star) {
  if (!(a_minus > 0.0) || !(a_plus > 0.0))
    throw ValidationError("asymmetric compression parameters must be positive");
  if (a_minus == 1.0 && a_plus == 1.0) return t;
  const double u = t - t_star;
  return std::min(u, 0.0) / a_minus + std::max(u, 0.0) / a_plus + t_star;
}

double transform_local(double t, double a, double sigma, double t_star) {
  if (!(a >= kLocalMinA)) throw ValidationError("local compression parameter a below the monotone bound 0.4");
  if (!(sigma > 0.0)) throw ValidationError("local compression width sigma must be positive");
  const double u = t - t_star;
  return t - u * (1.0 - 1.0 / a) * std::exp(-u * u / (2.0 * sigma * sigma));
}

double transform_local_derivative(double t, double a, double sigma, double t_star) {
  const double v = (t - t_star) * (t - t_star) / (sigma * sigma);
  return 1.0 - (1.0 - 1.0 / a) * std::exp(-0.5 * v) * (1.0 - v);
}

void certify_local_monotone(double a, double sigma, double t_star, double lo, double hi) {
  if (!(a >= kLocalMinA)) throw ValidationError("local compression parameter a below the monotone bound 0.4");
  if (!(sigma > 0.0)) throw ValidationError("local compression width sigma must be positive");
  if (hi < lo) std::swap(lo, hi);
  constexpr int kGrid = 1000;
  for (int k = 0; k < kGrid; ++k) {
    const double t = lo + (hi - lo) * k / (kGrid - 1);
    if (!(transform_local_derivative(t, a, sigma, t_star) > 0.0))
      throw ValidationError("local transform is not monotone on the data range");
  }
}

std::string to_string(FocalRule rule) {
  switch (rule) {
    case FocalRule::mean: return "mean";
    case FocalRule::median: return "median";
    case FocalRule::ks_argmax: return "ks_argmax";
    case FocalRule::fixed: return "fixed";
  }
  return "?";
}

FocalRule parse_focal_rule(const std::string& s) {
  if (s == "mean") return FocalRule::mean;
  if (s == "median") return FocalRule::median;
  if (s == "ks_argmax") return FocalRule::ks_argmax;
  if (s == "fixed") return FocalRule::fixed;
  throw ValidationError("unknown focal rule '" + s + "'");
}

double focal_point(const Dataset& data, std::size_t i, FocalRule rule) {
  if (data.rows() == 0) throw ValidationError("focal point of an empty column");
  if (i >= data.cols()) throw ValidationError("predictor index out of range");
  const auto col = data.column(i);
  switch (rule) {
    case FocalRule::mean: {
      double s = 0.0;
      for (double v : col) s += v;
      return s / static_cast<double>(col.size());
    }
    case FocalRule::median: return EmpiricalDistribution(col).quantile(0.5);
    case FocalRule::ks_argmax: {
      std::vector<double> c0, c1;
      for (std::size_t r = 0; r < col.size(); ++r) (data.g()[r] == 0 ? c0 : c1).push_back(col[r]);
      if (c0.empty() || c1.empty()) throw ValidationError("ks_argmax focal point needs both G classes");
      return ks_argmax(EmpiricalDistribution(c0), EmpiricalDistribution(c1));
    }
    case FocalRule::fixed: break;
  }
  throw ValidationError("a fixed focal point has no data rule");
}

double PredictorTransform::operator()(double t) const {
  switch (kind) {
    case TransformKind::global: return transform_global(t, a, focal);
    case TransformKind::asymmetric: return transform_asymmetric(t, a_minus, a_plus, focal);
    case TransformKind::local: return transform_local(t, a, sigma, focal);
  }
  return t;
}

void PredictorTransform::validate() const {
  if (!std::isfinite(focal)) throw ValidationError("focal point must be finite");
  switch (kind) {
    case TransformKind::global:
      if (!(a > 0.0) || !std::isfinite(a)) throw ValidationError("global a must be positive");
      break;
    case TransformKind::asymmetric:
      if (!(a_minus > 0.0) || !(a_plus > 0.0) || !std::isfinite(a_minus) || !std::isfinite(a_plus))
        throw ValidationError("asymmetric parameters must be positive");
      break;
    case TransformKind::local:
      if (!(a >= kLocalMinA) || !std::isfinite(a))
        throw ValidationError("local a below the monotone bound 0.4");
      if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("local sigma must be positive");
      break;
  }
}

nlohmann::json PredictorTransform::to_json() const {
  nlohmann::json j{{"index", index}, {"predictor", name}, {"kind", to_string(kind)},
                   {"focal_rule", to_string(focal_rule)}, {"focal", focal}};
  switch (kind) {
    case TransformKind::global: j["a"] = a; break;
    case TransformKind::asymmetric:
      j["a_minus"] = a_minus;
      j["a_plus"] = a_plus;
      break;
    case TransformKind::local:
      j["a"] = a;
      j["sigma"] = sigma;
      break;
  }
  return j;
}

PredictorTransform PredictorTransform::from_json(const nlohmann::json& j) {
  PredictorTransform t;
  t.index = j.at("index").get<std::size_t>();
  t.name = j.value("predictor", "");
  t.kind = parse_transform_kind(j.at("kind").get<std::string>());
  t.focal = j.at("focal").get<double>();
  t.focal_rule = parse_focal_rule(j.value("focal_rule", "fixed"));
  t.a = j.value("a", 1.0);
  t.a_minus = j.value("a_minus", 1.0);
  t.a_plus = j.value("a_plus", 1.0);
  t.sigma = j.value("sigma", 1.0);
  t.validate();
  return t;
}

std::vector<std::size_t> CompressiveParams::indices() const {
  std::vector<std::size_t> out;
  for (const auto& t : transforms) out.push_back(t.index);
  return out;
}

nlohmann::json CompressiveParams::to_json() const {
  auto arr = nlohmann::json::array();
  for (const auto& t : transforms) arr.push_back(t.to_json());
  return {{"transforms", arr}};
}

CompressiveParams CompressiveParams::from_json(const nlohmann::json& j) {
  CompressiveParams p;
  for (const auto& t : j.at("transforms")) p.transforms.push_back(PredictorTransform::from_json(t));
  return p;
}

PostProcessedModel::PostProcessedModel(std::shared_ptr<const Model> base, CompressiveParams params,
                                       std::optional<CalibrationMap> calibration)
    : base_(std::move(base)), params_(std::move(params)), calibration_(std::move(calibration)) {
  if (!base_) throw ValidationError("post-processing needs a base model");
  for (const auto& t : params_.transforms) {
    if (t.index >= base_->num_features()) throw ValidationError("transform index out of range");
    t.validate();
  }
}

std::vector<double> PostProcessedModel::transform_rows(std::span<const double> rows) const {
  const std::size_t n = num_features();
  std::vector<double> out(rows.begin(), rows.end());
  for (std::size_t r = 0; r * n < out.size(); ++r)
    for (const auto& t : params_.transforms) out[r * n + t.index] = t(out[r * n + t.index]);
  return out;
}

double PostProcessedModel::predict_uncalibrated(std::span<const double> x) const {
  auto z = transform_rows(x);
  return base_->predict(z);
}

std::vector<double> PostProcessedModel::predict_uncalibrated(const Dataset& data) const {
  if (data.cols() != num_features()) throw ValidationError("dataset width does not match model");
  auto z = transform_rows(data.values());
  std::vector<double> out(data.rows());
  base_->predict_batch(z, out);
  return out;
}

double PostProcessedModel::predict(std::span<const double> x) const {
  const double s = predict_uncalibrated(x);
  return calibration_ ? (*calibration_)(s) : s;
}

void PostProcessedModel::predict_batch(std::span<const double> rows, std::span<double> out) const {
  auto z = transform_rows(rows);
  base_->predict_batch(z, out);
  if (calibration_) calibration_->apply(out);
}

PostProcessedModel PostProcessedModel::with_calibration(std::optional<CalibrationMap> calibration) const {
  return PostProcessedModel(base_, params_, std::move(calibration));
}

PostProcessedModel build_postprocessed(std::shared_ptr<const Model> base,
                                       std::span<const std::size_t> impact,
                                       CompressiveParams params, const Dataset* data) {
  std::set<std::size_t> want(impact.begin(), impact.end());
  std::set<std::size_t> have;
  for (const auto& t : params.transforms)
    if (!have.insert(t.index).second) throw ValidationError("duplicate transform for one predictor");
  if (want.size() != impact.size()) throw ValidationError("impact list has duplicates");
  if (want != have) throw ValidationError("transform parameters do not cover the impact list exactly");
  if (data) {
    for (const auto& t : params.transforms) {
      if (t.kind != TransformKind::local) continue;
      const auto col = data->column(t.index);
      const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
      certify_local_monotone(t.a, t.sigma, t.focal, *lo, *hi);
    }
  }
  return PostProcessedModel(std::move(base), std::move(params));
}

}  // namespace fairpost
