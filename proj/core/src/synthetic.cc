#include "fairpost/synthetic.h"

#include <array>
#include <cmath>
#include <random>

#include "fairpost/error.h"
#include "fairpost/metrics.h"

namespace fairpost {
namespace {

constexpr double kMu = 5.0;

double normal(std::mt19937_64& rng, double mean, double variance) {
  return std::normal_distribution<double>(mean, std::sqrt(variance))(rng);
}

std::array<double, 5> draw_shifted(std::mt19937_64& rng, const std::array<double, 5>& shift,
                                   const std::array<double, 5>& variance, int g) {
  std::array<double, 5> x{};
  for (std::size_t i = 0; i < 5; ++i) x[i] = normal(rng, kMu - shift[i] * (1 - g), variance[i]);
  return x;
}

std::array<double, 5> draw_m4(std::mt19937_64& rng, int g) {
  constexpr double s = 1.6;
  const double z0 = normal(rng, kMu, 1.25);
  const double z1 = normal(rng, kMu, 2.0);
  const double z3 = normal(rng, kMu, 1.0);
  const double z2 = sample_skew_normal(rng, kMu - 1.5, 2.4, 8.0);
  const double z4 = sample_skew_normal(rng, kMu + 1.5, 2.4, -1.0);
  // Tail swap only for the non-protected class.
  const bool swap1 = g == 0 && (z0 > kMu + s || z0 < kMu - s);
  const bool swap3 = g == 0 && (z3 > kMu + s || z3 < kMu - s);
  std::array<double, 5> x{};
  x[0] = swap1 ? z2 : z1;
  x[1] = normal(rng, kMu - 0.6 * (1 - g), 1.0);
  x[2] = swap3 ? z4 : z1;
  x[3] = normal(rng, kMu + 0.15 * (1 - g), 1.25 - 0.75 * g);
  x[4] = normal(rng, kMu - 0.45 * (1 - g), 1.0);
  return x;
}

}  // namespace

std::string to_string(SyntheticModel m) {
  switch (m) {
    case SyntheticModel::M1: return "M1";
    case SyntheticModel::M2: return "M2";
    case SyntheticModel::M3: return "M3";
    case SyntheticModel::M4: return "M4";
  }
  return "?";
}

SyntheticModel parse_synthetic_model(const std::string& s) {
  if (s == "M1" || s == "m1") return SyntheticModel::M1;
  if (s == "M2" || s == "m2") return SyntheticModel::M2;
  if (s == "M3" || s == "m3") return SyntheticModel::M3;
  if (s == "M4" || s == "m4") return SyntheticModel::M4;
  throw ValidationError("unknown synthetic model '" + s + "' (expected M1..M4)");
}

double synthetic_response(SyntheticModel m, std::span<const double> x) {
  double sum = 0.0;
  for (double v : x) sum += v;
  return m == SyntheticModel::M4 ? sigmoid(1.5 * (sum - 24.0)) : sigmoid(2.0 * (sum - 24.5));
}

Dataset generate(const SyntheticSpec& spec) {
  if (spec.n_rows < 1) throw ValidationError("n_rows must be at least 1");
  if (!(spec.p_protected > 0.0 && spec.p_protected < 1.0))
    throw ValidationError("p_protected must lie in (0,1)");
  std::mt19937_64 rng(spec.seed);
  const std::size_t n = spec.n_rows;

  std::vector<int> g(n), y(n);
  std::bernoulli_distribution coin(spec.p_protected);
  std::size_t ones = 0;
  for (auto& v : g) ones += (v = coin(rng) ? 1 : 0);
  if (n >= 2 && (ones == 0 || ones == n)) g.back() = 1 - g.back();

  std::array<double, 5> shift{}, variance{};
  switch (spec.model) {
    case SyntheticModel::M1:
      shift = {10.0 / 20, -4.0 / 20, 16.0 / 20, 1.0 / 20, -3.0 / 20};
      break;
    case SyntheticModel::M2:
      shift = {0.25, 0.10, 0.40, -0.025, 0.075};
      break;
    case SyntheticModel::M3:
      shift = {0.25, 0.10, 0.40, 0.025, 0.075};
      break;
    case SyntheticModel::M4: break;
  }

  std::vector<double> values;
  values.reserve(n * 5);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (std::size_t r = 0; r < n; ++r) {
    const int gr = g[r];
    std::array<double, 5> x{};
    switch (spec.model) {
      case SyntheticModel::M1:
        variance = {0.5 + gr, 1.0, 1.0, 1.0 - 0.5 * gr, 1.0 - 0.75 * gr};
        x = draw_shifted(rng, shift, variance, gr);
        break;
      case SyntheticModel::M2:
        variance = {0.5 + 0.75 * gr, 1.0, 1.0, 1.0 - 0.75 * gr, 1.0};
        x = draw_shifted(rng, shift, variance, gr);
        break;
      case SyntheticModel::M3:
        variance = {1.0, 1.0, 1.0, 1.0, 1.0};
        x = draw_shifted(rng, shift, variance, gr);
        break;
      case SyntheticModel::M4: x = draw_m4(rng, gr); break;
    }
    values.insert(values.end(), x.begin(), x.end());
    y[r] = u01(rng) < synthetic_response(spec.model, x) ? 1 : 0;
  }
  return Dataset({"x1", "x2", "x3", "x4", "x5"}, std::move(values), std::move(g), std::move(y));
}

}  // namespace fairpost
