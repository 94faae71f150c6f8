#ifndef FAIRPOST_EXPLAIN_H_
#define FAIRPOST_EXPLAIN_H_

// Predictor explainers built on the marginal game
//
//   v(S; x) = E_b[ f(x_S, B_{-S}) ],
//
// with the expectation taken over a background sample: partial dependence
// (S = {i}), marginal Shapley values, and single-anchor ICE sections.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fairpost/dataset.h"
#include "fairpost/model.h"

namespace fairpost {

enum class ExplainerKind { pdp, marginal_shapley, ice };

std::string to_string(ExplainerKind kind);

// Row-major rows x predictors matrix of explanations.
struct ExplainerOutput {
  ExplainerKind kind = ExplainerKind::pdp;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  std::size_t background_size = 0;

  double at(std::size_t r, std::size_t i) const { return values[r * cols + i]; }
  std::vector<double> column(std::size_t i) const;
};

inline constexpr std::size_t kDefaultBackgroundRows = 500;
inline constexpr std::uint64_t kDefaultBackgroundSeed = 0x5eedULL;

// Fixed-seed subsample of at most 500 rows.
Dataset default_background(const Dataset& data);

// v({i}; x_r) for every row r.
std::vector<double> pdp_explainer(const Model& model, const Dataset& data, std::size_t i,
                                  const Dataset& background);
ExplainerOutput pdp_all(const Model& model, const Dataset& data, const Dataset& background);

// Exact enumeration is limited to this many predictors.
inline constexpr std::size_t kMaxExactPredictors = 12;

// Values of the marginal game for every coalition (bit mask) and row.
class CoalitionTable {
 public:
  CoalitionTable(std::size_t rows, std::size_t predictors);

  std::size_t rows() const { return rows_; }
  std::size_t predictors() const { return n_; }
  std::size_t coalitions() const { return std::size_t{1} << n_; }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * coalitions(), coalitions()};
  }
  std::span<double> row(std::size_t r) { return {values_.data() + r * coalitions(), coalitions()}; }

 private:
  std::size_t rows_;
  std::size_t n_;
  std::vector<double> values_;
};

CoalitionTable marginal_game_table(const Model& model, const Dataset& data,
                                   const Dataset& background);

// Shapley values of a game given on all 2^n coalitions (index = bit mask).
std::vector<double> shapley_from_game(std::span<const double> game, std::size_t n);

enum class ShapleyMode { exact, sampled };

struct ShapleyOptions {
  ShapleyMode mode = ShapleyMode::exact;
  // Sampled mode: permutations per row, drawn as antithetic pairs (a
  // permutation followed by its reverse).
  int n_permutations = 64;
  std::uint64_t seed = 0;
};

// ValidationError when exact mode exceeds kMaxExactPredictors or
// n_permutations < 1.
ExplainerOutput marginal_shapley(const Model& model, const Dataset& data,
                                 const Dataset& background, const ShapleyOptions& options = {});

// t -> f(t at position i, anchor elsewhere).
class IceSection {
 public:
  IceSection(const Model& model, std::vector<double> anchor, std::size_t i);

  double operator()(double t) const;
  std::vector<double> evaluate(std::span<const double> ts) const;
  std::size_t predictor() const { return i_; }

 private:
  const Model* model_;
  std::vector<double> anchor_;
  std::size_t i_;
};

IceSection ice_explainer(const Model& model, const Dataset& data, std::size_t i,
                         std::span<const double> anchor);

}  // namespace fairpost

#endif  // FAIRPOST_EXPLAIN_H_
