#include "fairpost/calibrate.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairpost/logistic.h"
#include "fairpost/metrics.h"

namespace fairpost {

std::string to_string(CalibrationKind kind) {
  switch (kind) {
    case CalibrationKind::pava: return "pava";
    case CalibrationKind::logistic_refit: return "logistic_refit";
    case CalibrationKind::link_linear: return "link_linear";
  }
  return "?";
}

CalibrationKind parse_calibration_kind(const std::string& s) {
  if (s == "pava") return CalibrationKind::pava;
  if (s == "logistic_refit") return CalibrationKind::logistic_refit;
  if (s == "link_linear") return CalibrationKind::link_linear;
  throw ValidationError("unknown calibration kind '" + s + "'");
}

CalibrationMap CalibrationMap::step(std::vector<double> knots, std::vector<double> levels) {
  if (knots.empty() || knots.size() != levels.size())
    throw ValidationError("step map needs matching nonempty knots and levels");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i] > knots[i - 1])) throw ValidationError("step knots must increase strictly");
    if (levels[i] < levels[i - 1]) throw ValidationError("step levels must be nondecreasing");
  }
  CalibrationMap m;
  m.kind_ = CalibrationKind::pava;
  m.knots_ = std::move(knots);
  m.levels_ = std::move(levels);
  return m;
}

CalibrationMap CalibrationMap::logit_linear(CalibrationKind kind, double b0, double b1) {
  if (kind == CalibrationKind::pava) throw ValidationError("pava maps are step maps");
  if (!std::isfinite(b0) || !std::isfinite(b1)) throw NumericalError("non-finite calibration coefficients");
  CalibrationMap m;
  m.kind_ = kind;
  m.b0_ = b0;
  m.b1_ = b1;
  return m;
}

double CalibrationMap::operator()(double s) const {
  if (kind_ == CalibrationKind::pava) {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), s);
    if (it == knots_.begin()) return levels_.front();
    return levels_[static_cast<std::size_t>(it - knots_.begin()) - 1];
  }
  return sigmoid(b0_ + b1_ * logit(s));
}

void CalibrationMap::apply(std::span<double> scores) const {
  for (double& s : scores) s = (*this)(s);
}

nlohmann::json CalibrationMap::to_json() const {
  nlohmann::json j{{"kind", to_string(kind_)}};
  if (kind_ == CalibrationKind::pava) {
    j["knots"] = knots_;
    j["levels"] = levels_;
  } else {
    j["b0"] = b0_;
    j["b1"] = b1_;
    j["clamp"] = kProbClamp;
  }
  return j;
}

CalibrationMap CalibrationMap::from_json(const nlohmann::json& j) {
  const auto kind = parse_calibration_kind(j.at("kind").get<std::string>());
  if (kind == CalibrationKind::pava)
    return step(j.at("knots").get<std::vector<double>>(), j.at("levels").get<std::vector<double>>());
  return logit_linear(kind, j.at("b0").get<double>(), j.at("b1").get<double>());
}

std::vector<double> isotonic_fit(std::span<const double> y,
                                 std::optional<std::span<const double>> weights) {
  const std::size_t n = y.size();
  if (weights && weights->size() != n) throw ValidationError("weights and values differ in length");
  // Blocks of pooled adjacent values: level, weight, count.
  std::vector<double> level, weight;
  std::vector<std::size_t> count;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weights ? (*weights)[i] : 1.0;
    if (!(w > 0.0)) throw ValidationError("isotonic weights must be positive");
    level.push_back(y[i]);
    weight.push_back(w);
    count.push_back(1);
    while (level.size() > 1 && level[level.size() - 2] > level.back()) {
      const std::size_t k = level.size() - 1;
      const double wt = weight[k - 1] + weight[k];
      level[k - 1] = (weight[k - 1] * level[k - 1] + weight[k] * level[k]) / wt;
      weight[k - 1] = wt;
      count[k - 1] += count[k];
      level.pop_back();
      weight.pop_back();
      count.pop_back();
    }
  }
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t b = 0; b < level.size(); ++b) out.insert(out.end(), count[b], level[b]);
  return out;
}

CalibrationMap pava_isotonic(std::span<const double> x, std::span<const double> y,
                             std::optional<std::span<const double>> weights) {
  const std::size_t n = x.size();
  if (n == 0) throw ValidationError("isotonic regression of an empty sample");
  if (y.size() != n || (weights && weights->size() != n))
    throw ValidationError("isotonic inputs differ in length");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> knots, ys, ws;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = order[k];
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw ValidationError("non-finite isotonic input");
    const double w = weights ? (*weights)[i] : 1.0;
    if (!(w > 0.0)) throw ValidationError("isotonic weights must be positive");
    if (!knots.empty() && knots.back() == x[i]) {
      ys.back() = (ws.back() * ys.back() + w * y[i]) / (ws.back() + w);
      ws.back() += w;
    } else {
      knots.push_back(x[i]);
      ys.push_back(y[i]);
      ws.push_back(w);
    }
  }
  auto levels = isotonic_fit(ys, std::span<const double>(ws));
  return CalibrationMap::step(std::move(knots), std::move(levels));
}

CalibrationMap link_linear_calibrate(std::span<const double> post_scores,
                                     std::span<const double> base_scores) {
  const std::size_t n = post_scores.size();
  if (n == 0 || base_scores.size() != n)
    throw ValidationError("calibration needs equally long nonempty score vectors");
  std::vector<double> gt(n), gb(n);
  double mt = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    gt[i] = logit(post_scores[i]);
    gb[i] = logit(base_scores[i]);
    mt += gt[i];
    mb += gb[i];
  }
  mt /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (gt[i] - mt) * (gt[i] - mt);
    sxy += (gt[i] - mt) * (gb[i] - mb);
  }
  // Relative test: the centered sum of squares of a constant vector is only
  // zero up to rounding.
  if (!(sxx > 1e-24 * static_cast<double>(n) * (1.0 + mt * mt))) throw CalibrationError("post-processed scores are constant; link regression undefined");
  const double b1 = sxy / sxx;
  if (!(b1 > 0.0)) throw CalibrationError("link regression slope is not positive; monotonicity lost");
  return CalibrationMap::logit_linear(CalibrationKind::link_linear, mb - b1 * mt, b1);
}

LogisticRefit logistic_refit(std::span<const double> post_scores, std::span<const int> y) {
  if (post_scores.size() != y.size() || y.empty())
    throw ValidationError("logistic refit needs equally long nonempty inputs");
  std::vector<double> design(post_scores.size());
  for (std::size_t i = 0; i < design.size(); ++i) {
    if (!std::isfinite(post_scores[i])) throw ValidationError("non-finite score");
    design[i] = logit(post_scores[i]);
  }
  LogisticRefit out{CalibrationMap::logit_linear(CalibrationKind::logistic_refit, 0.0, 1.0), false, {}};
  auto fit = fit_logistic_guarded(design, 1, y, &out.warnings);
  out.fallback = fit.ridge > 0.0;
  out.map = CalibrationMap::logit_linear(CalibrationKind::logistic_refit, fit.coef[0], fit.coef[1]);
  return out;
}

double auc(std::span<const double> scores, std::span<const int> labels) {
  const std::size_t n = scores.size();
  if (labels.size() != n) throw ValidationError("scores and labels differ in length");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  std::size_t n1 = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    // Average of 1-based ranks i+1..j.
    const double mid = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k)
      if (labels[order[k]] == 1) {
        rank_sum += mid;
        ++n1;
      }
    i = j;
  }
  const std::size_t n0 = n - n1;
  if (n1 == 0 || n0 == 0) throw ValidationError("AUC needs both label values");
  const double u = rank_sum - 0.5 * static_cast<double>(n1) * static_cast<double>(n1 + 1);
  return u / (static_cast<double>(n1) * static_cast<double>(n0));
}

}  // namespace fairpost
