#ifndef FAIRPOST_EMPIRICAL_H_
#define FAIRPOST_EMPIRICAL_H_

// Exact machinery for one-dimensional empirical distributions: step CDFs,
// generalized-inverse quantiles, Wasserstein-1 with a signed split of the
// transport, and the Kolmogorov-Smirnov distance.
//
// Everything here is computed exactly for step CDFs. W1 integrates the
// quantile difference over the pooled set of probability breakpoints of both
// distributions, so unequal sample sizes and weights need no grid.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace fairpost {

class EmpiricalDistribution {
 public:
  // Sorts the samples and merges ties into single weighted atoms. Weights
  // default to uniform; when given they must be nonnegative with a positive
  // total and are renormalized to sum to one.
  // Throws ValidationError on empty input, NaN/inf samples, negative weights
  // or a size mismatch.
  explicit EmpiricalDistribution(std::span<const double> samples,
                                 std::optional<std::span<const double>> weights = std::nullopt);

  // Distinct support points, strictly increasing.
  const std::vector<double>& atoms() const { return atoms_; }
  // Probability mass of each atom.
  const std::vector<double>& masses() const { return masses_; }
  // cumulative()[k] = F(atoms()[k]); the last entry is exactly 1.
  const std::vector<double>& cumulative() const { return cumulative_; }

  std::size_t size() const { return atoms_.size(); }
  double min() const { return atoms_.front(); }
  double max() const { return atoms_.back(); }
  double mean() const;

  // Right-continuous CDF, F(t) = P(X <= t).
  double cdf(double t) const;

  // Generalized inverse inf{x : p <= F(x)} for p in (0, 1]; p <= 0 maps to
  // the smallest atom and p > 1 to the largest.
  double quantile(double p) const;

 private:
  std::vector<double> atoms_;
  std::vector<double> masses_;
  std::vector<double> cumulative_;
};

// Split of the transport effort between two distributions. With
// d = (F0^[-1](p) - F1^[-1](p)) * sign, positive_part integrates d over the
// set where d > 0 and negative_part integrates -d where d < 0.
struct SignedTransport {
  double total = 0.0;
  double positive_part = 0.0;
  double negative_part = 0.0;

  double net() const { return positive_part - negative_part; }
};

double wasserstein1(const EmpiricalDistribution& d0, const EmpiricalDistribution& d1);

// favorable_sign must be +1 or -1 (ValidationError otherwise).
SignedTransport wasserstein1_signed(const EmpiricalDistribution& d0,
                                    const EmpiricalDistribution& d1, int favorable_sign);

// sup_t |F0(t) - F1(t)|, attained on the pooled atoms.
double ks_distance(const EmpiricalDistribution& d0, const EmpiricalDistribution& d1);

// The first pooled atom at which |F0 - F1| reaches its supremum.
double ks_argmax(const EmpiricalDistribution& d0, const EmpiricalDistribution& d1);

}  // namespace fairpost

#endif  // FAIRPOST_EMPIRICAL_H_
