#include "fairpost/empirical.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairpost/error.h"

namespace fairpost {

EmpiricalDistribution::EmpiricalDistribution(std::span<const double> samples,
                                             std::optional<std::span<const double>> weights) {
  if (samples.empty()) throw ValidationError("empirical distribution needs at least one sample");
  if (weights && weights->size() != samples.size())
    throw ValidationError("weights and samples differ in length");

  std::vector<std::pair<double, double>> pts(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double v = samples[i];
    if (!std::isfinite(v)) throw ValidationError("non-finite sample in empirical distribution");
    double w = 1.0;
    if (weights) {
      w = (*weights)[i];
      if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("negative or non-finite weight");
    }
    pts[i] = {v, w};
  }
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  double total = 0.0;
  for (const auto& [v, w] : pts) {
    if (!atoms_.empty() && atoms_.back() == v) {
      masses_.back() += w;
    } else {
      atoms_.push_back(v);
      masses_.push_back(w);
    }
    total += w;
  }
  if (!(total > 0.0)) throw ValidationError("weights sum to zero");

  // Zero-mass atoms carry no information and would create empty intervals.
  std::size_t out = 0;
  for (std::size_t k = 0; k < atoms_.size(); ++k) {
    if (masses_[k] > 0.0) {
      atoms_[out] = atoms_[k];
      masses_[out] = masses_[k];
      ++out;
    }
  }
  atoms_.resize(out);
  masses_.resize(out);

  cumulative_.resize(out);
  if (!weights) {
    // Counts are exact integers, so k/n breakpoints coincide bit-for-bit
    // between samples of equal size.
    const auto n = static_cast<double>(samples.size());
    double count = 0.0;
    for (std::size_t k = 0; k < out; ++k) {
      count += masses_[k];
      cumulative_[k] = count / n;
      masses_[k] /= n;
    }
  } else {
    double acc = 0.0;
    for (std::size_t k = 0; k < out; ++k) {
      acc += masses_[k];
      cumulative_[k] = acc / total;
      masses_[k] /= total;
    }
  }
  cumulative_.back() = 1.0;
}

double EmpiricalDistribution::mean() const {
  double m = 0.0;
  for (std::size_t k = 0; k < atoms_.size(); ++k) m += atoms_[k] * masses_[k];
  return m;
}

double EmpiricalDistribution::cdf(double t) const {
  auto it = std::upper_bound(atoms_.begin(), atoms_.end(), t);
  if (it == atoms_.begin()) return 0.0;
  return cumulative_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
}

double EmpiricalDistribution::quantile(double p) const {
  if (p <= 0.0) return atoms_.front();
  auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), p);
  if (it == cumulative_.end()) return atoms_.back();
  return atoms_[static_cast<std::size_t>(it - cumulative_.begin())];
}

SignedTransport wasserstein1_signed(const EmpiricalDistribution& d0,
                                    const EmpiricalDistribution& d1, int favorable_sign) {
  if (favorable_sign != 1 && favorable_sign != -1)
    throw ValidationError("favorable sign must be +1 or -1");

  const auto& v0 = d0.atoms();
  const auto& v1 = d1.atoms();
  const auto& c0 = d0.cumulative();
  const auto& c1 = d1.cumulative();

  SignedTransport out;
  std::size_t i = 0, j = 0;
  double p_prev = 0.0;
  // On (p_prev, p_next] both quantile functions are constant.
  while (i < v0.size() && j < v1.size()) {
    const double p_next = std::min(c0[i], c1[j]);
    const double dp = p_next - p_prev;
    if (dp > 0.0) {
      const double d = (v0[i] - v1[j]) * favorable_sign;
      if (d > 0.0) {
        out.positive_part += d * dp;
      } else if (d < 0.0) {
        out.negative_part -= d * dp;
      }
    }
    p_prev = p_next;
    if (c0[i] == p_next) ++i;
    if (c1[j] == p_next) ++j;
  }
  out.total = out.positive_part + out.negative_part;
  return out;
}

double wasserstein1(const EmpiricalDistribution& d0, const EmpiricalDistribution& d1) {
  return wasserstein1_signed(d0, d1, 1).total;
}

namespace {

// Walks the pooled atoms in increasing order, reporting F0 - F1 at each.
template <typename Visit>
void walk_cdf_gap(const EmpiricalDistribution& d0, const EmpiricalDistribution& d1, Visit&& visit) {
  const auto& v0 = d0.atoms();
  const auto& v1 = d1.atoms();
  const auto& c0 = d0.cumulative();
  const auto& c1 = d1.cumulative();
  std::size_t i = 0, j = 0;
  double f0 = 0.0, f1 = 0.0;
  while (i < v0.size() || j < v1.size()) {
    double t;
    if (j >= v1.size() || (i < v0.size() && v0[i] <= v1[j])) {
      t = v0[i];
    } else {
      t = v1[j];
    }
    while (i < v0.size() && v0[i] == t) f0 = c0[i++];
    while (j < v1.size() && v1[j] == t) f1 = c1[j++];
    visit(t, f0 - f1);
  }
}

}  // namespace

double ks_distance(const EmpiricalDistribution& d0, const EmpiricalDistribution& d1) {
  double best = 0.0;
  walk_cdf_gap(d0, d1, [&](double, double gap) { best = std::max(best, std::abs(gap)); });
  return best;
}

double ks_argmax(const EmpiricalDistribution& d0, const EmpiricalDistribution& d1) {
  double best = -1.0;
  double where = d0.min();
  walk_cdf_gap(d0, d1, [&](double t, double gap) {
    if (std::abs(gap) > best) {
      best = std::abs(gap);
      where = t;
    }
  });
  return where;
}

}  // namespace fairpost
