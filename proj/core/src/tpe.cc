#include "fairpost/tpe.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>

#include "fairpost/error.h"

namespace fairpost {
namespace {

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Parzen density on [0,1]^d: kernels at `centers` plus one uniform component.
// Each kernel's width in dimension j is the larger gap to its neighbours
// among the sorted centers (the box edges count as neighbours), clipped to
// [1/min(100, n+1), 1].
class Parzen {
 public:
  Parzen(std::vector<std::vector<double>> centers, std::size_t d)
      : centers_(std::move(centers)), d_(d), bw_(centers_.size() * d, 1.0), mass_(centers_.size() * d, 1.0) {
    const std::size_t n = centers_.size();
    const double floor = 1.0 / std::min(100.0, static_cast<double>(n) + 1.0);
    std::vector<std::size_t> order(n);
    for (std::size_t j = 0; j < d_; ++j) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](auto a, auto b) { return centers_[a][j] < centers_[b][j]; });
      for (std::size_t r = 0; r < n; ++r) {
        const double c = centers_[order[r]][j];
        const double left = r == 0 ? c : c - centers_[order[r - 1]][j];
        const double right = r + 1 == n ? 1.0 - c : centers_[order[r + 1]][j] - c;
        bw_[order[r] * d_ + j] = std::clamp(std::max(left, right), floor, 1.0);
      }
      for (std::size_t k = 0; k < n; ++k) {
        const double h = bw_[k * d_ + j];
        mass_[k * d_ + j] = norm_cdf((1.0 - centers_[k][j]) / h) - norm_cdf(-centers_[k][j] / h);
      }
    }
  }

  double log_density(const std::vector<double>& x) const {
    double sum = 1.0;  // uniform component on the unit box
    for (std::size_t k = 0; k < centers_.size(); ++k) {
      double log_k = 0.0;
      for (std::size_t j = 0; j < d_; ++j) {
        const double h = bw_[k * d_ + j];
        const double z = (x[j] - centers_[k][j]) / h;
        log_k += -0.5 * z * z - std::log(h * std::sqrt(2.0 * std::numbers::pi) * mass_[k * d_ + j]);
      }
      sum += std::exp(log_k);
    }
    return std::log(sum / (static_cast<double>(centers_.size()) + 1.0));
  }

  template <class Rng>
  std::vector<double> sample(Rng& rng) const {
    std::uniform_int_distribution<std::size_t> pick(0, centers_.size());
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<double> x(d_);
    const std::size_t k = pick(rng);
    if (k == centers_.size()) {
      for (auto& v : x) v = u01(rng);
      return x;
    }
    std::normal_distribution<double> n01(0.0, 1.0);
    for (std::size_t j = 0; j < d_; ++j) {
      double v;
      int tries = 0;
      do {
        v = centers_[k][j] + bw_[k * d_ + j] * n01(rng);
      } while ((v < 0.0 || v > 1.0) && ++tries < 64);
      x[j] = std::clamp(v, 0.0, 1.0);
    }
    return x;
  }

 private:
  std::vector<std::vector<double>> centers_;
  std::size_t d_;
  std::vector<double> bw_;
  std::vector<double> mass_;
};

}  // namespace

TpeOptimizer::TpeOptimizer(std::vector<double> lo, std::vector<double> hi, std::uint64_t seed,
                           TpeOptions options)
    : lo_(std::move(lo)), hi_(std::move(hi)), rng_(seed), options_(options) {
  if (lo_.size() != hi_.size()) throw ValidationError("bound vectors differ in length");
  for (std::size_t j = 0; j < lo_.size(); ++j)
    if (!(lo_[j] <= hi_[j]) || !std::isfinite(lo_[j]) || !std::isfinite(hi_[j]))
      throw ValidationError("search bounds must be finite with lo <= hi");
  if (!(options_.gamma > 0.0 && options_.gamma < 1.0)) throw ValidationError("TPE gamma must lie in (0,1)");
  if (options_.n_candidates < 1) throw ValidationError("TPE needs at least one candidate");
}

std::vector<double> TpeOptimizer::sample_uniform() {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<double> x(lo_.size());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = lo_[j] + (hi_[j] - lo_[j]) * u01(rng_);
  return x;
}

std::vector<double> TpeOptimizer::propose(std::span<const std::vector<double>> xs,
                                          std::span<const double> ys) {
  if (xs.size() != ys.size()) throw ValidationError("observations and values differ in length");
  const std::size_t n = xs.size();
  if (n < static_cast<std::size_t>(std::max(options_.min_observations, 2))) return sample_uniform();

  const std::size_t d = lo_.size();
  auto to_unit = [&](const std::vector<double>& x) {
    std::vector<double> u(d);
    for (std::size_t j = 0; j < d; ++j)
      u[j] = hi_[j] > lo_[j] ? (x[j] - lo_[j]) / (hi_[j] - lo_[j]) : 0.5;
    return u;
  };
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return ys[a] < ys[b]; });
  const auto n_good = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(options_.gamma * static_cast<double>(n))));
  std::vector<std::vector<double>> good, bad;
  for (std::size_t k = 0; k < n; ++k) (k < n_good ? good : bad).push_back(to_unit(xs[order[k]]));
  if (bad.empty()) return sample_uniform();
  Parzen l(std::move(good), d), g(std::move(bad), d);

  std::vector<double> best;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < options_.n_candidates; ++c) {
    auto u = l.sample(rng_);
    const double s = l.log_density(u) - g.log_density(u);
    if (s > best_score) {
      best_score = s;
      best = std::move(u);
    }
  }
  if (best.empty()) {
    ++fallbacks_;
    return sample_uniform();
  }
  std::vector<double> x(d);
  for (std::size_t j = 0; j < d; ++j) x[j] = lo_[j] + (hi_[j] - lo_[j]) * best[j];
  return x;
}

}  // namespace fairpost
