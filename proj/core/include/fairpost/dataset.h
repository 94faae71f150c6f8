#ifndef FAIRPOST_DATASET_H_
#define FAIRPOST_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fairpost {

// Row-major table of predictors with a protected attribute G in {0,1} and a
// binary response Y in {0,1}. G is carried alongside the rows for bias
// measurement only; models never see it.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<std::string> names, std::vector<double> values, std::vector<int> g,
          std::vector<int> y);

  std::size_t rows() const { return g_.size(); }
  std::size_t cols() const { return names_.size(); }

  const std::vector<std::string>& names() const { return names_; }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols(), cols()};
  }
  double at(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }
  std::vector<double> column(std::size_t c) const;
  const std::vector<double>& values() const { return values_; }
  const std::vector<int>& g() const { return g_; }
  const std::vector<int>& y() const { return y_; }

  // Index of a named predictor; ValidationError when absent.
  std::size_t index_of(const std::string& name) const;

  Dataset subset(std::span<const std::size_t> rows) const;

 private:
  std::vector<std::string> names_;
  std::vector<double> values_;
  std::vector<int> g_;
  std::vector<int> y_;
};

// CSV with header x1,...,xn,g,y. Predictor columns keep their header names.
Dataset read_csv(const std::string& path);
void write_csv(const Dataset& data, const std::string& path);

// Shuffles rows with the seed and cuts them into consecutive pieces with the
// given fractions (which must sum to at most 1; the remainder goes to the last
// piece).
std::vector<Dataset> split(const Dataset& data, std::span<const double> fractions,
                           std::uint64_t seed);

// Fixed-seed subsample of at most max_rows rows (all rows when smaller).
Dataset subsample(const Dataset& data, std::size_t max_rows, std::uint64_t seed);

}  // namespace fairpost

#endif  // FAIRPOST_DATASET_H_
