#ifndef FAIRPOST_DETAIL_SKEW_NORMAL_H_
#define FAIRPOST_DETAIL_SKEW_NORMAL_H_

#include <cmath>
#include <random>

namespace fairpost {

// Z = delta |U0| + sqrt(1 - delta^2) U1 with delta = alpha / sqrt(1 + alpha^2)
// has density 2 phi(z) Phi(alpha z).
template <class Rng>
double sample_skew_normal(Rng& rng, double xi, double omega, double alpha) {
  std::normal_distribution<double> n01(0.0, 1.0);
  const double delta = alpha / std::sqrt(1.0 + alpha * alpha);
  const double u0 = n01(rng);
  const double u1 = n01(rng);
  return xi + omega * (delta * std::abs(u0) + std::sqrt(1.0 - delta * delta) * u1);
}

}  // namespace fairpost

#endif  // FAIRPOST_DETAIL_SKEW_NORMAL_H_
