#ifndef FAIRPOST_BIAS_H_
#define FAIRPOST_BIAS_H_

// Model, classifier and quantile bias between the subpopulations G=0
// (non-protected) and G=1 of a score, under a partition-weighted W1 metric:
//
//   Bias(f) = sum_m w_m * W1(f(X) | {A_m, G=0}, f(X) | {A_m, G=1}).
//
// The positive part is transport of the G=0 distribution in the
// non-favorable direction, the negative part in the favorable one.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fairpost/dataset.h"
#include "fairpost/empirical.h"

namespace fairpost {

struct PartitionCell {
  std::string name;
  double weight = 1.0;
  std::function<bool(std::span<const double> x, int y)> contains;
};

// Disjoint cells A_m with positive weights summing to one.
class PartitionSpec {
 public:
  explicit PartitionSpec(std::vector<PartitionCell> cells);

  // A = {Omega}: statistical parity.
  static PartitionSpec statistical_parity();
  // A = {{Y=0},{Y=1}}: equalized odds. Weights default to (1/2, 1/2).
  static PartitionSpec equalized_odds(double w0 = 0.5, double w1 = 0.5);

  const std::vector<PartitionCell>& cells() const { return cells_; }

 private:
  std::vector<PartitionCell> cells_;
};

// Rows of a concrete dataset falling in each cell.
struct CellRows {
  std::vector<std::string> names;
  std::vector<double> weights;
  std::vector<std::vector<std::size_t>> rows;

  static CellRows all_rows(std::size_t n);
};

// Throws ValidationError if a row lands in two cells.
CellRows assign_cells(const PartitionSpec& spec, const Dataset& data);

struct BiasReport {
  double total = 0.0;
  double positive = 0.0;
  double negative = 0.0;
  double net = 0.0;
  std::vector<SignedTransport> per_cell;
  std::vector<std::string> cell_names;
  int favorable_sign = 1;
  std::vector<std::string> warnings;
};

// Cells with fewer rows than this in either class get a warning.
inline constexpr std::size_t kSmallCellRows = 10;

// Throws ValidationError when a cell is empty or lacks one of the classes
// (the message names the cell), or when a score is not finite.
BiasReport model_bias(std::span<const double> scores, std::span<const int> g,
                      const CellRows& cells, int favorable_sign = 1);
BiasReport model_bias(std::span<const double> scores, const Dataset& data,
                      const PartitionSpec& partition, int favorable_sign = 1);

// Statistical-parity shortcut (A = {Omega}).
BiasReport model_bias(std::span<const double> scores, std::span<const int> g,
                      int favorable_sign = 1);

// Subpopulation distributions of the score within the given rows.
std::pair<EmpiricalDistribution, EmpiricalDistribution> subpopulations(
    std::span<const double> scores, std::span<const int> g, std::span<const std::size_t> rows,
    const std::string& cell_name = "all");

// (F1(t) - F0(t)) * sign; its absolute value is the classifier bias at t.
double classifier_bias(std::span<const double> scores, std::span<const int> g, double t,
                       int favorable_sign = 1);

// (F0^[-1](p) - F1^[-1](p)) * sign for p in (0,1).
double quantile_bias(std::span<const double> scores, std::span<const int> g, double p,
                     int favorable_sign = 1);

// Fair up to epsilon: total <= epsilon (inclusive).
bool is_fair(const BiasReport& report, double epsilon);

}  // namespace fairpost

#endif  // FAIRPOST_BIAS_H_
