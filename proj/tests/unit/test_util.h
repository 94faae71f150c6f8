#ifndef FAIRPOST_TESTS_TEST_UTIL_H_
#define FAIRPOST_TESTS_TEST_UTIL_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fairpost/dataset.h"

namespace fairpost::testing {

// Columns are independent normals: G=0 rows draw N(mean0[j], 1), G=1 rows
// N(mean1[j], sd1[j]^2). Y is a fair coin.
inline Dataset class_normals(std::size_t n, const std::vector<double>& mean0,
                             const std::vector<double>& mean1, const std::vector<double>& sd1,
                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::normal_distribution<double> z(0.0, 1.0);
  const std::size_t p = mean0.size();
  std::vector<std::string> names;
  for (std::size_t j = 0; j < p; ++j) names.push_back("x" + std::to_string(j + 1));
  std::vector<double> v;
  v.reserve(n * p);
  std::vector<int> g(n), y(n);
  for (std::size_t r = 0; r < n; ++r) {
    g[r] = coin(rng) ? 1 : 0;
    for (std::size_t j = 0; j < p; ++j)
      v.push_back(g[r] ? mean1[j] + sd1[j] * z(rng) : mean0[j] + z(rng));
    y[r] = coin(rng) ? 1 : 0;
  }
  return Dataset(names, v, g, y);
}

// Shifts every column to zero sample mean.
inline Dataset centered(const Dataset& d) {
  std::vector<double> v = d.values();
  for (std::size_t j = 0; j < d.cols(); ++j) {
    double m = 0.0;
    for (std::size_t r = 0; r < d.rows(); ++r) m += d.at(r, j);
    m /= static_cast<double>(d.rows());
    for (std::size_t r = 0; r < d.rows(); ++r) v[r * d.cols() + j] -= m;
  }
  return Dataset(d.names(), v, d.g(), d.y());
}

}  // namespace fairpost::testing

#endif  // FAIRPOST_TESTS_TEST_UTIL_H_
