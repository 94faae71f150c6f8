#include "fairpost/pareto.h"

#include <algorithm>
#include <limits>
#include <numeric>

namespace fairpost {

std::vector<std::size_t> pareto_extract(std::span<const BiasLoss> points) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) {
    if (points[a].bias != points[b].bias) return points[a].bias < points[b].bias;
    return points[a].loss < points[b].loss;
  });
  std::vector<std::size_t> keep;
  double best_before = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < order.size();) {
    std::size_t end = k;
    while (end < order.size() && points[order[end]].bias == points[order[k]].bias) ++end;
    // Within a group of equal bias the first entry carries the minimum loss.
    const double group_min = points[order[k]].loss;
    if (group_min < best_before)
      for (std::size_t j = k; j < end && points[order[j]].loss == group_min; ++j)
        keep.push_back(order[j]);
    best_before = std::min(best_before, group_min);
    k = end;
  }
  std::sort(keep.begin(), keep.end());
  return keep;
}

std::vector<std::size_t> convex_envelope(std::span<const BiasLoss> points) {
  auto front = pareto_extract(points);
  std::sort(front.begin(), front.end(), [&](auto a, auto b) {
    if (points[a].bias != points[b].bias) return points[a].bias < points[b].bias;
    return a < b;
  });
  auto cross = [&](std::size_t o, std::size_t a, std::size_t b) {
    return (points[a].bias - points[o].bias) * (points[b].loss - points[o].loss) -
           (points[a].loss - points[o].loss) * (points[b].bias - points[o].bias);
  };
  std::vector<std::size_t> hull;
  for (std::size_t idx : front) {
    if (!hull.empty() && points[hull.back()].bias == points[idx].bias &&
        points[hull.back()].loss == points[idx].loss)
      continue;
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), idx) <= 0.0) hull.pop_back();
    hull.push_back(idx);
  }
  return hull;
}

}  // namespace fairpost
