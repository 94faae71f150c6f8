#include "fairpost/metrics.h"

#include <algorithm>
#include <cmath>

#include "fairpost/error.h"

namespace fairpost {

double clamp_prob(double s, double delta) { return std::clamp(s, delta, 1.0 - delta); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double logit(double s, double delta) {
  const double p = clamp_prob(s, delta);
  return std::log(p) - std::log1p(-p);
}

double log_loss(std::span<const int> y, std::span<const double> scores, double delta) {
  if (y.size() != scores.size()) throw ValidationError("labels and scores differ in length");
  if (y.empty()) throw ValidationError("log_loss of an empty sample");
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (std::isnan(scores[i])) throw ValidationError("NaN score");
    const double s = clamp_prob(scores[i], delta);
    sum -= y[i] ? std::log(s) : std::log1p(-s);
  }
  return sum / static_cast<double>(y.size());
}

}  // namespace fairpost
