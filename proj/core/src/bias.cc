#include "fairpost/bias.h"

#include <cmath>
#include <numeric>

#include "fairpost/error.h"

namespace fairpost {

PartitionSpec::PartitionSpec(std::vector<PartitionCell> cells) : cells_(std::move(cells)) {
  if (cells_.empty()) throw ValidationError("partition needs at least one cell");
  double sum = 0.0;
  for (const auto& c : cells_) {
    if (!(c.weight > 0.0)) throw ValidationError("partition weight must be positive: " + c.name);
    if (!c.contains) throw ValidationError("partition cell without predicate: " + c.name);
    sum += c.weight;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ValidationError("partition weights must sum to 1");
}

PartitionSpec PartitionSpec::statistical_parity() {
  return PartitionSpec({{"all", 1.0, [](std::span<const double>, int) { return true; }}});
}

PartitionSpec PartitionSpec::equalized_odds(double w0, double w1) {
  return PartitionSpec({{"y=0", w0, [](std::span<const double>, int y) { return y == 0; }},
                        {"y=1", w1, [](std::span<const double>, int y) { return y == 1; }}});
}

CellRows CellRows::all_rows(std::size_t n) {
  CellRows out;
  out.names = {"all"};
  out.weights = {1.0};
  out.rows.emplace_back(n);
  std::iota(out.rows[0].begin(), out.rows[0].end(), std::size_t{0});
  return out;
}

CellRows assign_cells(const PartitionSpec& spec, const Dataset& data) {
  CellRows out;
  for (const auto& c : spec.cells()) {
    out.names.push_back(c.name);
    out.weights.push_back(c.weight);
  }
  out.rows.resize(spec.cells().size());
  for (std::size_t r = 0; r < data.rows(); ++r) {
    int hit = -1;
    for (std::size_t m = 0; m < spec.cells().size(); ++m) {
      if (spec.cells()[m].contains(data.row(r), data.y()[r])) {
        if (hit >= 0)
          throw ValidationError("partition cells '" + out.names[static_cast<std::size_t>(hit)] +
                                "' and '" + out.names[m] + "' overlap");
        hit = static_cast<int>(m);
      }
    }
    if (hit >= 0) out.rows[static_cast<std::size_t>(hit)].push_back(r);
  }
  return out;
}

std::pair<EmpiricalDistribution, EmpiricalDistribution> subpopulations(
    std::span<const double> scores, std::span<const int> g, std::span<const std::size_t> rows,
    const std::string& cell_name) {
  if (scores.size() != g.size()) throw ValidationError("scores and g differ in length");
  if (rows.empty()) throw ValidationError("partition cell '" + cell_name + "' is empty");
  std::vector<double> s0, s1;
  for (std::size_t r : rows) {
    if (r >= scores.size()) throw ValidationError("row index out of range");
    (g[r] == 0 ? s0 : s1).push_back(scores[r]);
  }
  if (s0.empty() || s1.empty())
    throw ValidationError("partition cell '" + cell_name + "' is missing class G=" +
                          std::string(s0.empty() ? "0" : "1"));
  return {EmpiricalDistribution(s0), EmpiricalDistribution(s1)};
}

BiasReport model_bias(std::span<const double> scores, std::span<const int> g,
                      const CellRows& cells, int favorable_sign) {
  if (favorable_sign != 1 && favorable_sign != -1)
    throw ValidationError("favorable sign must be +1 or -1");
  BiasReport report;
  report.favorable_sign = favorable_sign;
  report.cell_names = cells.names;
  for (std::size_t m = 0; m < cells.rows.size(); ++m) {
    const auto& name = cells.names[m];
    auto [d0, d1] = subpopulations(scores, g, cells.rows[m], name);
    std::size_t n1 = 0;
    for (std::size_t r : cells.rows[m]) n1 += g[r] == 1;
    const std::size_t n0 = cells.rows[m].size() - n1;
    if (n0 < kSmallCellRows || n1 < kSmallCellRows)
      report.warnings.push_back("cell '" + name + "' has fewer than " +
                                std::to_string(kSmallCellRows) + " rows in a class (" +
                                std::to_string(n0) + " vs " + std::to_string(n1) + ")");
    auto t = wasserstein1_signed(d0, d1, favorable_sign);
    const double w = cells.weights[m];
    report.positive += w * t.positive_part;
    report.negative += w * t.negative_part;
    report.per_cell.push_back(t);
  }
  report.total = report.positive + report.negative;
  report.net = report.positive - report.negative;
  return report;
}

BiasReport model_bias(std::span<const double> scores, const Dataset& data,
                      const PartitionSpec& partition, int favorable_sign) {
  return model_bias(scores, data.g(), assign_cells(partition, data), favorable_sign);
}

BiasReport model_bias(std::span<const double> scores, std::span<const int> g, int favorable_sign) {
  return model_bias(scores, g, CellRows::all_rows(scores.size()), favorable_sign);
}

double classifier_bias(std::span<const double> scores, std::span<const int> g, double t,
                       int favorable_sign) {
  auto all = CellRows::all_rows(scores.size());
  auto [d0, d1] = subpopulations(scores, g, all.rows[0]);
  return (d1.cdf(t) - d0.cdf(t)) * favorable_sign;
}

double quantile_bias(std::span<const double> scores, std::span<const int> g, double p,
                     int favorable_sign) {
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("quantile level must lie in (0,1)");
  auto all = CellRows::all_rows(scores.size());
  auto [d0, d1] = subpopulations(scores, g, all.rows[0]);
  return (d0.quantile(p) - d1.quantile(p)) * favorable_sign;
}

bool is_fair(const BiasReport& report, double epsilon) {
  if (epsilon < 0.0) throw ValidationError("epsilon must be nonnegative");
  return report.total <= epsilon;
}

}  // namespace fairpost
