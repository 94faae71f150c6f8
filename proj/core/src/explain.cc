#include "fairpost/explain.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include "fairpost/error.h"
#include "fairpost/parallel.h"

namespace fairpost {

std::string to_string(ExplainerKind kind) {
  switch (kind) {
    case ExplainerKind::pdp: return "pdp";
    case ExplainerKind::marginal_shapley: return "marginal_shapley";
    case ExplainerKind::ice: return "ice";
  }
  return "?";
}

std::vector<double> ExplainerOutput::column(std::size_t i) const {
  std::vector<double> out(rows);
  for (std::size_t r = 0; r < rows; ++r) out[r] = at(r, i);
  return out;
}

Dataset default_background(const Dataset& data) {
  return subsample(data, kDefaultBackgroundRows, kDefaultBackgroundSeed);
}

namespace {

void check_inputs(const Model& model, const Dataset& data, const Dataset& background) {
  if (background.rows() == 0) throw ValidationError("background sample is empty");
  if (data.cols() != model.num_features() || background.cols() != model.num_features())
    throw ValidationError("dataset width does not match model");
}

// Mean over the background of f(x_S from `x`, rest from background), S as mask.
class GameEvaluator {
 public:
  GameEvaluator(const Model& model, const Dataset& background)
      : model_(model), bg_(background), buf_(background.values()), out_(background.rows()) {}

  double value(std::span<const double> x, std::uint64_t mask) {
    const std::size_t n = bg_.cols();
    std::copy(bg_.values().begin(), bg_.values().end(), buf_.begin());
    for (std::size_t j = 0; j < n; ++j) {
      if (!(mask >> j & 1U)) continue;
      for (std::size_t b = 0; b < bg_.rows(); ++b) buf_[b * n + j] = x[j];
    }
    model_.predict_batch(buf_, out_);
    double s = 0.0;
    for (double v : out_) s += v;
    return s / static_cast<double>(out_.size());
  }

 private:
  const Model& model_;
  const Dataset& bg_;
  std::vector<double> buf_;
  std::vector<double> out_;
};

}  // namespace

std::vector<double> pdp_explainer(const Model& model, const Dataset& data, std::size_t i,
                                  const Dataset& background) {
  check_inputs(model, data, background);
  if (i >= data.cols()) throw ValidationError("predictor index out of range");
  std::vector<double> out(data.rows());
  parallel_for(data.rows(), [&](std::size_t r) {
    GameEvaluator game(model, background);
    out[r] = game.value(data.row(r), std::uint64_t{1} << i);
  });
  return out;
}

ExplainerOutput pdp_all(const Model& model, const Dataset& data, const Dataset& background) {
  check_inputs(model, data, background);
  ExplainerOutput out{ExplainerKind::pdp, data.rows(), data.cols(),
                      std::vector<double>(data.rows() * data.cols()), background.rows()};
  parallel_for(data.rows(), [&](std::size_t r) {
    GameEvaluator game(model, background);
    for (std::size_t i = 0; i < data.cols(); ++i)
      out.values[r * data.cols() + i] = game.value(data.row(r), std::uint64_t{1} << i);
  });
  return out;
}

CoalitionTable::CoalitionTable(std::size_t rows, std::size_t predictors)
    : rows_(rows), n_(predictors) {
  if (predictors > kMaxExactPredictors)
    throw ValidationError("exact enumeration supports at most " +
                          std::to_string(kMaxExactPredictors) + " predictors");
  values_.assign(rows * coalitions(), 0.0);
}

CoalitionTable marginal_game_table(const Model& model, const Dataset& data,
                                   const Dataset& background) {
  check_inputs(model, data, background);
  CoalitionTable table(data.rows(), data.cols());
  parallel_for(data.rows(), [&](std::size_t r) {
    GameEvaluator game(model, background);
    auto row = table.row(r);
    for (std::size_t m = 0; m < table.coalitions(); ++m) row[m] = game.value(data.row(r), m);
  });
  return table;
}

std::vector<double> shapley_from_game(std::span<const double> game, std::size_t n) {
  const std::size_t total = std::size_t{1} << n;
  if (game.size() != total) throw ValidationError("game table size is not 2^n");
  // weight[k] = k! (n-k-1)! / n! for coalitions of size k not containing i.
  std::vector<double> weight(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double w = 1.0 / static_cast<double>(n);
    // 1/n * 1/C(n-1, k)
    for (std::size_t j = 1; j <= k; ++j) w *= static_cast<double>(j) / static_cast<double>(n - j);
    weight[k] = w;
  }
  std::vector<double> phi(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t s = 0; s < total; ++s) {
      if (s & bit) continue;
      const auto k = static_cast<std::size_t>(std::popcount(s));
      phi[i] += weight[k] * (game[s | bit] - game[s]);
    }
  }
  return phi;
}

ExplainerOutput marginal_shapley(const Model& model, const Dataset& data,
                                 const Dataset& background, const ShapleyOptions& options) {
  check_inputs(model, data, background);
  const std::size_t n = data.cols();
  ExplainerOutput out{ExplainerKind::marginal_shapley, data.rows(), n,
                      std::vector<double>(data.rows() * n), background.rows()};
  if (options.mode == ShapleyMode::exact) {
    if (n > kMaxExactPredictors)
      throw ValidationError("exact Shapley supports at most " +
                            std::to_string(kMaxExactPredictors) + " predictors");
    const auto table = marginal_game_table(model, data, background);
    for (std::size_t r = 0; r < data.rows(); ++r) {
      const auto phi = shapley_from_game(table.row(r), n);
      std::copy(phi.begin(), phi.end(), out.values.begin() + static_cast<std::ptrdiff_t>(r * n));
    }
    return out;
  }
  if (options.n_permutations < 1) throw ValidationError("n_permutations must be at least 1");
  if (n >= 64) throw ValidationError("too many predictors for coalition masks");
  parallel_for(data.rows(), [&](std::size_t r) {
    GameEvaluator game(model, background);
    std::mt19937_64 rng(options.seed ^ (0x9e3779b97f4a7c15ULL * (r + 1)));
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::vector<double> acc(n, 0.0);
    const auto x = data.row(r);
    const double empty = game.value(x, 0);
    for (int k = 0; k < options.n_permutations; ++k) {
      if (k % 2 == 0)
        std::shuffle(perm.begin(), perm.end(), rng);
      else
        std::reverse(perm.begin(), perm.end());
      std::uint64_t mask = 0;
      double prev = empty;
      for (std::size_t j : perm) {
        mask |= std::uint64_t{1} << j;
        const double cur = game.value(x, mask);
        acc[j] += cur - prev;
        prev = cur;
      }
    }
    for (std::size_t i = 0; i < n; ++i) out.values[r * n + i] = acc[i] / options.n_permutations;
  });
  return out;
}

IceSection::IceSection(const Model& model, std::vector<double> anchor, std::size_t i)
    : model_(&model), anchor_(std::move(anchor)), i_(i) {
  if (anchor_.size() != model.num_features()) throw ValidationError("anchor width does not match model");
  if (i_ >= anchor_.size()) throw ValidationError("predictor index out of range");
  for (std::size_t j = 0; j < anchor_.size(); ++j)
    if (j != i_ && !std::isfinite(anchor_[j])) throw ValidationError("anchor has a non-finite value");
}

double IceSection::operator()(double t) const {
  std::vector<double> x = anchor_;
  x[i_] = t;
  return model_->predict(x);
}

std::vector<double> IceSection::evaluate(std::span<const double> ts) const {
  const std::size_t n = anchor_.size();
  std::vector<double> rows(ts.size() * n);
  for (std::size_t k = 0; k < ts.size(); ++k) {
    std::copy(anchor_.begin(), anchor_.end(), rows.begin() + static_cast<std::ptrdiff_t>(k * n));
    rows[k * n + i_] = ts[k];
  }
  std::vector<double> out(ts.size());
  model_->predict_batch(rows, out);
  return out;
}

IceSection ice_explainer(const Model& model, const Dataset& data, std::size_t i,
                         std::span<const double> anchor) {
  if (data.cols() != model.num_features()) throw ValidationError("dataset width does not match model");
  return IceSection(model, std::vector<double>(anchor.begin(), anchor.end()), i);
}

}  // namespace fairpost
