#include "fairpost/logistic.h"

#include <algorithm>
#include <cmath>

#include "fairpost/error.h"
#include "fairpost/metrics.h"

namespace fairpost {
namespace {

constexpr double kGradTol = 1e-8;
constexpr int kMaxIter = 200;
constexpr double kSeparationCoef = 40.0;

// In-place Cholesky solve of a small dense SPD system; returns false when the
// matrix is not numerically positive definite.
bool cholesky_solve(std::vector<double> a, std::size_t n, std::vector<double>& b,
                    std::vector<double>* inverse_diag) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (!(d > 0.0)) return false;
    d = std::sqrt(d);
    a[j * n + j] = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / d;
    }
  }
  auto solve = [&](std::vector<double>& v) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = v[i];
      for (std::size_t k = 0; k < i; ++k) s -= a[i * n + k] * v[k];
      v[i] = s / a[i * n + i];
    }
    for (std::size_t i = n; i-- > 0;) {
      double s = v[i];
      for (std::size_t k = i + 1; k < n; ++k) s -= a[k * n + i] * v[k];
      v[i] = s / a[i * n + i];
    }
  };
  solve(b);
  if (inverse_diag) {
    inverse_diag->assign(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<double> e(n, 0.0);
      e[c] = 1.0;
      solve(e);
      (*inverse_diag)[c] = e[c];
    }
  }
  return true;
}

double penalized_nll(std::span<const double> design, std::size_t p, std::span<const int> y,
                     const std::vector<double>& beta, double ridge) {
  const std::size_t n = y.size();
  double nll = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    double z = beta[0];
    for (std::size_t c = 0; c < p; ++c) z += beta[c + 1] * design[r * p + c];
    // log(1 + e^z) - y z, computed stably
    nll += (z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z))) - y[r] * z;
  }
  for (double b : beta) nll += 0.5 * ridge * b * b;
  return nll;
}

}  // namespace

LogisticFit fit_logistic(std::span<const double> design, std::size_t p, std::span<const int> y,
                         double ridge) {
  const std::size_t n = y.size();
  if (n == 0) throw ValidationError("logistic fit on an empty sample");
  if (design.size() != n * p) throw ValidationError("design matrix shape mismatch");
  const std::size_t q = p + 1;
  LogisticFit fit;
  fit.ridge = ridge;
  fit.coef.assign(q, 0.0);
  double ybar = 0.0;
  for (int v : y) ybar += v;
  ybar /= static_cast<double>(n);
  if (ybar > 0.0 && ybar < 1.0) fit.coef[0] = std::log(ybar / (1.0 - ybar));

  std::vector<double> grad(q), hess(q * q), x(q);
  double current = penalized_nll(design, p, y, fit.coef, ridge);
  for (int it = 0; it < kMaxIter; ++it) {
    std::fill(grad.begin(), grad.end(), 0.0);
    std::fill(hess.begin(), hess.end(), 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      x[0] = 1.0;
      for (std::size_t c = 0; c < p; ++c) x[c + 1] = design[r * p + c];
      double z = 0.0;
      for (std::size_t c = 0; c < q; ++c) z += fit.coef[c] * x[c];
      const double mu = sigmoid(z);
      const double w = mu * (1.0 - mu);
      for (std::size_t a = 0; a < q; ++a) {
        grad[a] += (y[r] - mu) * x[a];
        for (std::size_t b = 0; b <= a; ++b) hess[a * q + b] += w * x[a] * x[b];
      }
    }
    for (std::size_t a = 0; a < q; ++a) {
      grad[a] -= ridge * fit.coef[a];
      hess[a * q + a] += ridge;
      for (std::size_t b = 0; b < a; ++b) hess[b * q + a] = hess[a * q + b];
    }
    double gmax = 0.0;
    for (double gv : grad) gmax = std::max(gmax, std::abs(gv) / static_cast<double>(n));
    fit.iterations = it;
    if (gmax <= kGradTol) {
      fit.converged = true;
      // A fit that reproduces every label has run off towards infinity.
      double worst = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        double z = fit.coef[0];
        for (std::size_t c = 0; c < p; ++c) z += fit.coef[c + 1] * design[r * p + c];
        worst = std::max(worst, std::abs(y[r] - sigmoid(z)));
      }
      if (ridge == 0.0 && worst < 1e-3) fit.separated = true;
      std::vector<double> dummy(q, 0.0), inv;
      if (cholesky_solve(hess, q, dummy, &inv)) {
        fit.std_err.resize(q);
        for (std::size_t a = 0; a < q; ++a) fit.std_err[a] = std::sqrt(inv[a]);
      }
      break;
    }
    std::vector<double> step = grad;
    if (!cholesky_solve(hess, q, step, nullptr)) {
      fit.separated = true;
      break;
    }
    // Step halving keeps the iteration monotone in the objective.
    double t = 1.0;
    std::vector<double> next(q);
    bool improved = false;
    for (int h = 0; h < 40; ++h, t *= 0.5) {
      for (std::size_t a = 0; a < q; ++a) next[a] = fit.coef[a] + t * step[a];
      const double val = penalized_nll(design, p, y, next, ridge);
      if (val <= current) {
        current = val;
        improved = true;
        break;
      }
    }
    if (!improved) break;
    fit.coef = next;
    for (double c : fit.coef)
      if (std::abs(c) > kSeparationCoef) fit.separated = true;
    if (fit.separated && ridge == 0.0) break;
  }
  if (ridge == 0.0 && (ybar == 0.0 || ybar == 1.0)) fit.separated = true;
  return fit;
}

LogisticFit fit_logistic_guarded(std::span<const double> design, std::size_t p,
                                 std::span<const int> y, std::vector<std::string>* warnings) {
  auto fit = fit_logistic(design, p, y, 0.0);
  if (fit.converged && !fit.separated) return fit;
  if (warnings)
    warnings->push_back(fit.separated ? "complete separation or single-class labels; refit with ridge penalty 1"
                                      : "Newton iterations did not converge; refit with ridge penalty 1");
  auto ridged = fit_logistic(design, p, y, 1.0);
  ridged.separated = true;
  if (!ridged.converged) throw NumericalError("ridge-penalized logistic fit did not converge");
  return ridged;
}

LogisticModel::LogisticModel(std::vector<double> coef, std::vector<std::string> names)
    : coef_(std::move(coef)), names_(std::move(names)) {
  if (coef_.empty()) throw ValidationError("logistic model needs an intercept");
  if (names_.size() != coef_.size() - 1) throw ValidationError("logistic names/coef mismatch");
}

double LogisticModel::predict(std::span<const double> x) const {
  double z = coef_[0];
  for (std::size_t c = 0; c + 1 < coef_.size(); ++c) z += coef_[c + 1] * x[c];
  return sigmoid(z);
}

nlohmann::json LogisticModel::to_json() const {
  return {{"kind", "logistic"}, {"coef", coef_}, {"names", names_}};
}

LogisticModel LogisticModel::from_json(const nlohmann::json& j) {
  if (j.value("kind", "") != "logistic") throw ValidationError("not a logistic model file");
  return LogisticModel(j.at("coef").get<std::vector<double>>(),
                       j.at("names").get<std::vector<std::string>>());
}

LogisticTraining train_logistic(const Dataset& data) {
  std::vector<std::string> warnings;
  auto fit = fit_logistic_guarded(data.values(), data.cols(), data.y(), &warnings);
  LogisticModel model(fit.coef, data.names());
  return {std::move(model), std::move(fit), std::move(warnings)};
}

}  // namespace fairpost
