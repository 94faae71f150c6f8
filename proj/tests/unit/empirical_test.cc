#include "fairpost/empirical.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fairpost/error.h"

namespace fairpost {
namespace {

std::vector<double> normals(std::size_t n, double mean, double sd, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(mean, sd);
  std::vector<double> v(n);
  for (auto& x : v) x = z(rng);
  return v;
}

EmpiricalDistribution dist(const std::vector<double>& v) { return EmpiricalDistribution(v); }

TEST(EmpiricalDistribution, SortsAndNormalizes) {
  std::vector<double> s{1.0, 3.0, 2.0};
  auto d = dist(s);
  EXPECT_EQ(d.atoms(), (std::vector<double>{1, 2, 3}));
  for (double m : d.masses()) EXPECT_DOUBLE_EQ(m, 1.0 / 3.0);
  EXPECT_EQ(d.cumulative().back(), 1.0);
}

TEST(EmpiricalDistribution, TiesMergeIntoWeightedAtoms) {
  std::vector<double> s{2.0, 1.0, 2.0, 2.0};
  auto d = dist(s);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_DOUBLE_EQ(d.masses()[1], 0.75);
}

TEST(EmpiricalDistribution, PointMassQuantile) {
  std::vector<double> s{5.0};
  auto d = dist(s);
  for (double p : {1e-9, 0.3, 0.5, 1.0}) EXPECT_EQ(d.quantile(p), 5.0);
}

TEST(EmpiricalDistribution, MedianMatchesOrderStatistic) {
  auto v = normals(10000, 0.0, 1.0, 7);
  auto d = dist(v);
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  // inf{x : 1/2 <= F(x)} is the 5000th order statistic.
  EXPECT_EQ(d.quantile(0.5), sorted[4999]);
  EXPECT_LT(std::abs(d.quantile(0.5)), 0.05);
}

TEST(EmpiricalDistribution, WeightsAreRenormalized) {
  std::vector<double> s{0.0, 1.0};
  std::vector<double> w{1.0, 3.0};
  EmpiricalDistribution d(s, std::span<const double>(w));
  EXPECT_DOUBLE_EQ(d.cdf(0.0), 0.25);
  EXPECT_DOUBLE_EQ(d.mean(), 0.75);
}

TEST(EmpiricalDistribution, RejectsBadInput) {
  std::vector<double> empty;
  EXPECT_THROW(dist(empty), ValidationError);
  std::vector<double> nan{1.0, std::nan("")};
  EXPECT_THROW(dist(nan), ValidationError);
  std::vector<double> s{1.0, 2.0};
  std::vector<double> neg{1.0, -1.0};
  EXPECT_THROW(EmpiricalDistribution(s, std::span<const double>(neg)), ValidationError);
  std::vector<double> short_w{1.0};
  EXPECT_THROW(EmpiricalDistribution(s, std::span<const double>(short_w)), ValidationError);
}

TEST(Wasserstein1, PointMasses) {
  std::vector<double> a{0.1}, b{-0.1};
  EXPECT_NEAR(wasserstein1(dist(a), dist(b)), 0.2, 1e-15);
  EXPECT_EQ(wasserstein1(dist(a), dist(a)), 0.0);
}

TEST(Wasserstein1, GaussianShiftMatchesSortedPairing) {
  auto x0 = normals(50000, 5.0, 1.0, 11);
  auto x1 = normals(50000, 5.5, 1.0, 12);
  const double w = wasserstein1(dist(x0), dist(x1));
  // Equal sizes: W1 is the mean gap between matching order statistics.
  std::sort(x0.begin(), x0.end());
  std::sort(x1.begin(), x1.end());
  double oracle = 0.0;
  for (std::size_t k = 0; k < x0.size(); ++k) oracle += std::abs(x0[k] - x1[k]);
  oracle /= static_cast<double>(x0.size());
  EXPECT_NEAR(w, oracle, 1e-10);
  EXPECT_NEAR(w, 0.5, 0.02);
}

TEST(Wasserstein1, SignedSplitOfPointMasses) {
  std::vector<double> one{1.0}, zero{0.0};
  auto t = wasserstein1_signed(dist(one), dist(zero), 1);
  EXPECT_EQ(t.total, 1.0);
  EXPECT_EQ(t.positive_part, 1.0);
  EXPECT_EQ(t.negative_part, 0.0);
  auto u = wasserstein1_signed(dist(zero), dist(one), 1);
  EXPECT_EQ(u.positive_part, 0.0);
  EXPECT_EQ(u.negative_part, 1.0);
  auto v = wasserstein1_signed(dist(one), dist(zero), -1);
  EXPECT_EQ(v.negative_part, 1.0);
  EXPECT_THROW(wasserstein1_signed(dist(one), dist(zero), 0), ValidationError);
}

TEST(Wasserstein1, CrossingCdfsSplitEvenly) {
  auto x0 = normals(50000, 0.0, std::sqrt(2.0), 21);
  auto x1 = normals(50000, 0.0, 1.0, 22);
  auto t = wasserstein1_signed(dist(x0), dist(x1), 1);
  EXPECT_NEAR(t.positive_part, t.negative_part, 0.05 * t.positive_part);
  EXPECT_NEAR(t.total, t.positive_part + t.negative_part, 1e-10);
}

TEST(Wasserstein1, ScalingIsExact) {
  auto x0 = normals(3000, 0.0, 1.0, 31);
  auto x1 = normals(2000, 0.4, 1.3, 32);
  const double base = wasserstein1(dist(x0), dist(x1));
  for (double c : {0.25, 2.0, 8.0}) {
    auto y0 = x0, y1 = x1;
    for (auto& v : y0) v *= c;
    for (auto& v : y1) v *= c;
    EXPECT_EQ(wasserstein1(dist(y0), dist(y1)), c * base);
  }
  auto y0 = x0, y1 = x1;
  for (auto& v : y0) v = 3.0 * v + 1.0;
  for (auto& v : y1) v = 3.0 * v + 1.0;
  EXPECT_NEAR(wasserstein1(dist(y0), dist(y1)), 3.0 * base, 1e-12);
}

TEST(Wasserstein1, TriangleInequality) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> size(1, 40);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(size(rng)), b(size(rng)), c(size(rng));
    for (auto* v : {&a, &b, &c})
      for (auto& x : *v) x = z(rng) * 2.0 + z(rng);
    const double ab = wasserstein1(dist(a), dist(b));
    const double bc = wasserstein1(dist(b), dist(c));
    const double ac = wasserstein1(dist(a), dist(c));
    EXPECT_LE(ac, ab + bc + 1e-12);
    EXPECT_NEAR(ab, wasserstein1(dist(b), dist(a)), 1e-12);
  }
}

TEST(Wasserstein1, MatchesQuantileGrid) {
  std::mt19937_64 rng(51);
  std::uniform_int_distribution<int> size(5, 300);
  std::uniform_real_distribution<double> u(-3.0, 4.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> a(size(rng)), b(size(rng));
    for (auto& x : a) x = u(rng);
    for (auto& x : b) x = u(rng) * 0.5 + 1.0;
    auto da = dist(a), db = dist(b);
    const int m = 100000;
    double grid = 0.0;
    for (int k = 0; k < m; ++k) {
      const double p = (k + 0.5) / m;
      grid += std::abs(da.quantile(p) - db.quantile(p));
    }
    grid /= m;
    const double range = std::max(da.max(), db.max()) - std::min(da.min(), db.min());
    EXPECT_NEAR(wasserstein1(da, db), grid, 1e-3 * range);
  }
}

TEST(KsDistance, Basics) {
  std::vector<double> a{0.1}, b{-0.1};
  EXPECT_EQ(ks_distance(dist(a), dist(b)), 1.0);
  std::vector<double> tiny_a{1e-12}, tiny_b{-1e-12};
  EXPECT_EQ(ks_distance(dist(tiny_a), dist(tiny_b)), 1.0);
  auto x = normals(100, 0, 1, 3);
  EXPECT_EQ(ks_distance(dist(x), dist(x)), 0.0);
}

TEST(KsDistance, GaussianShift) {
  auto x0 = normals(50000, 0.0, 1.0, 61);
  auto x1 = normals(50000, 0.5, 1.0, 62);
  // max_x |Phi(x) - Phi(x - 0.5)| = 2 Phi(0.25) - 1.
  const double oracle = std::erf(0.25 / std::sqrt(2.0));
  EXPECT_NEAR(ks_distance(dist(x0), dist(x1)), oracle, 0.02);
  EXPECT_NEAR(oracle, 0.197, 1e-3);
}

TEST(KsDistance, InvariantUnderIncreasingMaps) {
  auto x0 = normals(2000, 0.0, 1.0, 71);
  auto x1 = normals(1500, 0.3, 1.2, 72);
  const double base = ks_distance(dist(x0), dist(x1));
  auto f = [](double t) { return std::exp(t) + t * t * t; };
  for (auto& v : x0) v = f(v);
  for (auto& v : x1) v = f(v);
  EXPECT_EQ(ks_distance(dist(x0), dist(x1)), base);
}

TEST(KsDistance, ArgmaxAttainsSupremum) {
  auto x0 = normals(500, 0.0, 1.0, 81);
  auto x1 = normals(400, 0.7, 1.0, 82);
  auto d0 = dist(x0), d1 = dist(x1);
  const double t = ks_argmax(d0, d1);
  EXPECT_EQ(std::abs(d0.cdf(t) - d1.cdf(t)), ks_distance(d0, d1));
}

}  // namespace
}  // namespace fairpost
