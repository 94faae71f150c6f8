#ifndef FAIRPOST_PARETO_H_
#define FAIRPOST_PARETO_H_

#include <cstddef>
#include <span>
#include <vector>

namespace fairpost {

struct BiasLoss {
  double bias = 0.0;
  double loss = 0.0;
};

// Indices (ascending) of points not dominated by any other point, where p
// dominates q when p.bias <= q.bias and p.loss <= q.loss with at least one
// strict. Exact duplicates do not dominate each other.
std::vector<std::size_t> pareto_extract(std::span<const BiasLoss> points);

// Vertices of the lower-left convex hull of the nondominated set, ascending
// in bias.
std::vector<std::size_t> convex_envelope(std::span<const BiasLoss> points);

}  // namespace fairpost

#endif  // FAIRPOST_PARETO_H_
