#ifndef FAIRPOST_TPE_H_
#define FAIRPOST_TPE_H_

// Tree-structured Parzen estimator over a box. Observations are ranked by
// objective; the best `gamma` fraction feeds a density l(x) and the rest a
// density g(x), each a product of truncated Gaussian kernels plus a uniform
// prior component. Proposals maximize l/g over candidates drawn from l.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace fairpost {

struct TpeOptions {
  double gamma = 0.25;
  int n_candidates = 24;
  // Below this many observations proposals are uniform draws.
  int min_observations = 4;
};

class TpeOptimizer {
 public:
  TpeOptimizer(std::vector<double> lo, std::vector<double> hi, std::uint64_t seed,
               TpeOptions options = {});

  std::vector<double> sample_uniform();
  // Proposes the next point to evaluate given all observations so far.
  std::vector<double> propose(std::span<const std::vector<double>> xs, std::span<const double> ys);

  std::size_t dims() const { return lo_.size(); }
  // Proposals that fell back to a uniform draw because the density ratio was
  // not finite for any candidate.
  int fallbacks() const { return fallbacks_; }

 private:
  std::vector<double> lo_;
  std::vector<double> hi_;
  std::mt19937_64 rng_;
  TpeOptions options_;
  int fallbacks_ = 0;
};

}  // namespace fairpost

#endif  // FAIRPOST_TPE_H_
