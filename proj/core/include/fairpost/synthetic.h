#ifndef FAIRPOST_SYNTHETIC_H_
#define FAIRPOST_SYNTHETIC_H_

// Synthetic data-generating models with a protected attribute G and a
// logistic response. All four have five predictors x1..x5. Normal laws are
// parameterized by (mean, variance).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "fairpost/dataset.h"

namespace fairpost {

enum class SyntheticModel { M1, M2, M3, M4 };

std::string to_string(SyntheticModel m);
SyntheticModel parse_synthetic_model(const std::string& s);

// In all four models Y=1 is the unfavorable outcome, so larger scores are
// unfavorable.
inline constexpr int kSyntheticFavorableSign = -1;

struct SyntheticSpec {
  SyntheticModel model = SyntheticModel::M1;
  std::size_t n_rows = 10000;
  double p_protected = 0.5;
  std::uint64_t seed = 0;
};

// Bit-identical for identical specs. With n_rows >= 2 both G classes are
// always present: a single-class draw has its last row's G flipped before any
// predictor is sampled.
Dataset generate(const SyntheticSpec& spec);

// True P(Y=1 | X=x) of the model.
double synthetic_response(SyntheticModel m, std::span<const double> x);

// Skew-normal draw with location xi, scale omega and shape alpha.
template <class Rng>
double sample_skew_normal(Rng& rng, double xi, double omega, double alpha);

}  // namespace fairpost

#include "fairpost/detail/skew_normal.h"

#endif  // FAIRPOST_SYNTHETIC_H_
