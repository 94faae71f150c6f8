#ifndef FAIRPOST_MODEL_H_
#define FAIRPOST_MODEL_H_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fairpost/dataset.h"

namespace fairpost {

// A scalar regressor x -> f(x). Implementations are immutable after
// construction and safe to evaluate concurrently.
class Model {
 public:
  virtual ~Model() = default;
  virtual double predict(std::span<const double> x) const = 0;
  virtual std::size_t num_features() const = 0;

  // Row-major batch; the default loops over predict().
  virtual void predict_batch(std::span<const double> rows, std::span<double> out) const;
};

std::vector<double> predict_all(const Model& model, const Dataset& data);

// Wraps any callable, mostly for closed-form models in tests and examples.
class FunctionModel final : public Model {
 public:
  using Fn = std::function<double(std::span<const double>)>;
  FunctionModel(std::size_t num_features, Fn fn) : n_(num_features), fn_(std::move(fn)) {}

  double predict(std::span<const double> x) const override { return fn_(x); }
  std::size_t num_features() const override { return n_; }

 private:
  std::size_t n_;
  Fn fn_;
};

}  // namespace fairpost

#endif  // FAIRPOST_MODEL_H_
