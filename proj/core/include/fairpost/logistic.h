#ifndef FAIRPOST_LOGISTIC_H_
#define FAIRPOST_LOGISTIC_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairpost/dataset.h"
#include "fairpost/model.h"

namespace fairpost {

struct LogisticFit {
  // Intercept first, then one slope per column.
  std::vector<double> coef;
  // Asymptotic standard errors from the inverse Hessian at the optimum.
  std::vector<double> std_err;
  int iterations = 0;
  bool converged = false;
  bool separated = false;
  double ridge = 0.0;
};

// Maximum-likelihood logistic regression by damped Newton steps, stopping when
// the mean gradient has max-norm <= 1e-8. `design` is row-major n x p without
// the intercept column. A positive ridge adds ridge/2 * |coef|^2 (intercept
// included) to the negative log-likelihood.
LogisticFit fit_logistic(std::span<const double> design, std::size_t p, std::span<const int> y,
                         double ridge = 0.0);

// Fits unpenalized first; on separation or a single-class response refits
// with ridge 1 and reports it.
LogisticFit fit_logistic_guarded(std::span<const double> design, std::size_t p,
                                 std::span<const int> y, std::vector<std::string>* warnings);

class LogisticModel final : public Model {
 public:
  LogisticModel(std::vector<double> coef, std::vector<std::string> names);

  double predict(std::span<const double> x) const override;
  std::size_t num_features() const override { return coef_.size() - 1; }

  const std::vector<double>& coef() const { return coef_; }
  const std::vector<std::string>& names() const { return names_; }

  nlohmann::json to_json() const;
  static LogisticModel from_json(const nlohmann::json& j);

 private:
  std::vector<double> coef_;
  std::vector<std::string> names_;
};

struct LogisticTraining {
  LogisticModel model;
  LogisticFit fit;
  std::vector<std::string> warnings;
};

// Logistic regression of Y on the predictors (G is never used).
LogisticTraining train_logistic(const Dataset& data);

}  // namespace fairpost

#endif  // FAIRPOST_LOGISTIC_H_
