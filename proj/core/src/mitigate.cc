#include "fairpost/mitigate.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "fairpost/calibrate.h"
#include "fairpost/error.h"
#include "fairpost/metrics.h"
#include "fairpost/parallel.h"

namespace fairpost {

std::vector<double> default_omegas() {
  std::vector<double> w;
  for (int j = 0; j <= 20; ++j) w.push_back(2.0 * j / 20.0);
  return w;
}

nlohmann::json TransformSpec::to_json() const {
  nlohmann::json j{{"index", index}, {"kind", to_string(kind)}, {"focal_rule", to_string(focal_rule)}};
  if (kind == TransformKind::local) {
    j["a"] = {a_lo, a_hi};
    j["sigma"] = {sigma_lo, sigma_hi};
  } else {
    j["a"] = {a_lo, a_hi};
  }
  if (focal_lo && focal_hi) j["focal"] = {*focal_lo, *focal_hi};
  return j;
}

void SearchSettings::validate() const {
  if (n_prior < 1) throw ValidationError("n_prior must be at least 1");
  if (n_bo < 0) throw ValidationError("n_bo must be nonnegative");
  if (omegas.empty()) throw ValidationError("penalization list is empty");
  for (double w : omegas)
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("omega values must be finite and >= 0");
}

nlohmann::json SearchSettings::to_json() const {
  return {{"omegas", omegas},     {"n_prior", n_prior},
          {"n_bo", n_bo},         {"seed", seed},
          {"tpe", {{"gamma", tpe.gamma}, {"n_candidates", tpe.n_candidates},
                   {"min_observations", tpe.min_observations}}},
          {"convex_envelope", convex_envelope}};
}

nlohmann::json GbmBounds::to_json() const {
  return {{"n_estimators", {n_estimators_lo, n_estimators_hi}},
          {"max_leaves", {max_leaves_lo, max_leaves_hi}},
          {"max_depth", {max_depth_lo, max_depth_hi}},
          {"learning_rate", {learning_rate_lo, learning_rate_hi}},
          {"min_samples_leaf", min_samples_leaf}};
}

bool Frontier::on_frontier(std::size_t i) const {
  return std::binary_search(frontier_indices.begin(), frontier_indices.end(), i);
}

namespace {

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json metrics_json(const Metrics& m) {
  return {{"loss", m.loss}, {"bias", m.bias}, {"calibration_failed", m.calibration_failed}};
}

}  // namespace

std::string Frontier::to_csv() const {
  std::ostringstream os;
  os << "omega,bias,loss,dominated_flag,gamma_json\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    os << num(p.omega) << ',' << num(p.test.bias) << ',' << num(p.test.loss) << ','
       << (on_frontier(i) ? 0 : 1) << ',' << csv_quote(p.gamma.dump()) << '\n';
  }
  return os.str();
}

nlohmann::json Frontier::to_json() const {
  auto pts = nlohmann::json::array();
  for (const auto& p : points) {
    pts.push_back({{"gamma", p.gamma},
                   {"omega", std::isnan(p.omega) ? nlohmann::json(nullptr) : nlohmann::json(p.omega)},
                   {"source", p.source},
                   {"holdout", metrics_json(p.holdout)},
                   {"test", metrics_json(p.test)},
                   {"duplicate", p.duplicate}});
  }
  return {{"points", pts},
          {"frontier_indices", frontier_indices},
          {"envelope_indices", envelope_indices},
          {"warnings", warnings},
          {"manifest", manifest}};
}

PostProcessObjective::PostProcessObjective(std::shared_ptr<const Model> base,
                                           const Dataset& holdout, const Dataset& test,
                                           CellRows holdout_cells, CellRows test_cells,
                                           int favorable_sign, bool calibrate)
    : base_(std::move(base)),
      holdout_(holdout),
      test_(test),
      holdout_cells_(std::move(holdout_cells)),
      test_cells_(std::move(test_cells)),
      sign_(favorable_sign),
      calibrate_(calibrate) {
  if (!base_) throw ValidationError("objective needs a base model");
  base_holdout_scores_ = predict_all(*base_, holdout_);
}

std::pair<PostProcessedModel, bool> PostProcessObjective::build(const CompressiveParams& params) const {
  PostProcessedModel model(base_, params);
  if (!calibrate_) return {std::move(model), false};
  const auto post = model.predict_uncalibrated(holdout_);
  try {
    return {model.with_calibration(link_linear_calibrate(post, base_holdout_scores_)), false};
  } catch (const CalibrationError&) {
    return {std::move(model), true};
  }
}

Metrics PostProcessObjective::score(const Model& model, const Dataset& split,
                                    const CellRows& cells) const {
  const auto s = predict_all(model, split);
  Metrics m;
  m.loss = log_loss(split.y(), s);
  m.bias = model_bias(s, split.g(), cells, sign_).total;
  return m;
}

Metrics PostProcessObjective::evaluate_holdout(const CompressiveParams& params) const {
  auto [model, failed] = build(params);
  auto m = score(model, holdout_, holdout_cells_);
  m.calibration_failed = failed;
  return m;
}

Metrics PostProcessObjective::evaluate_test(const CompressiveParams& params) const {
  auto [model, failed] = build(params);
  auto m = score(model, test_, test_cells_);
  m.calibration_failed = failed;
  return m;
}

double PostProcessObjective::objective(const CompressiveParams& params, double omega) const {
  const auto m = evaluate_holdout(params);
  return m.loss + omega * m.bias;
}

Metrics PostProcessObjective::base_holdout() const { return score(*base_, holdout_, holdout_cells_); }
Metrics PostProcessObjective::base_test() const { return score(*base_, test_, test_cells_); }

ParamCodec::ParamCodec(std::vector<TransformSpec> specs, const Dataset& reference)
    : specs_(std::move(specs)) {
  if (specs_.empty()) throw ValidationError("search space has no transforms");
  for (const auto& s : specs_) {
    if (s.index >= reference.cols()) throw ValidationError("transform index out of range");
    if (std::find(indices_.begin(), indices_.end(), s.index) != indices_.end())
      throw ValidationError("predictor listed twice in the search space");
    indices_.push_back(s.index);
    names_.push_back(reference.names()[s.index]);
    auto push = [&](double lo, double hi, const char* what) {
      if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw ValidationError(std::string("invalid bounds for ") + what);
      lo_.push_back(lo);
      hi_.push_back(hi);
    };
    if (!(s.a_lo > 0.0)) throw ValidationError("compression bounds must be positive");
    if (s.kind == TransformKind::local && s.a_lo < kLocalMinA)
      throw ValidationError("local compression bounds must stay >= 0.4");
    switch (s.kind) {
      case TransformKind::global: push(s.a_lo, s.a_hi, "a"); break;
      case TransformKind::asymmetric:
        push(s.a_lo, s.a_hi, "a_minus");
        push(s.a_lo, s.a_hi, "a_plus");
        break;
      case TransformKind::local:
        push(s.a_lo, s.a_hi, "a");
        if (!(s.sigma_lo > 0.0)) throw ValidationError("sigma bounds must be positive");
        push(s.sigma_lo, s.sigma_hi, "sigma");
        break;
    }
    if (s.focal_lo && s.focal_hi) {
      push(*s.focal_lo, *s.focal_hi, "focal");
      focal_.push_back(std::numeric_limits<double>::quiet_NaN());
    } else {
      focal_.push_back(focal_point(reference, s.index, s.focal_rule));
    }
  }
}

CompressiveParams ParamCodec::decode(std::span<const double> x) const {
  if (x.size() != lo_.size()) throw ValidationError("parameter vector has the wrong length");
  CompressiveParams p;
  std::size_t k = 0;
  for (std::size_t t = 0; t < specs_.size(); ++t) {
    const auto& s = specs_[t];
    PredictorTransform tr;
    tr.index = s.index;
    tr.name = names_[t];
    tr.kind = s.kind;
    switch (s.kind) {
      case TransformKind::global: tr.a = x[k++]; break;
      case TransformKind::asymmetric:
        tr.a_minus = x[k++];
        tr.a_plus = x[k++];
        break;
      case TransformKind::local:
        tr.a = x[k++];
        tr.sigma = x[k++];
        break;
    }
    if (std::isnan(focal_[t])) {
      tr.focal = x[k++];
      tr.focal_rule = FocalRule::fixed;
    } else {
      tr.focal = focal_[t];
      tr.focal_rule = s.focal_rule;
    }
    p.transforms.push_back(tr);
  }
  return p;
}

SearchTrace run_search(const std::vector<double>& lo, const std::vector<double>& hi,
                       const std::function<std::pair<Metrics, Metrics>(std::span<const double>)>& evaluate,
                       const SearchSettings& settings) {
  settings.validate();
  SearchTrace trace;
  // Prior draws share one stream so they do not depend on the omega list.
  TpeOptimizer prior(lo, hi, settings.seed);
  const auto n_prior = static_cast<std::size_t>(settings.n_prior);
  for (std::size_t i = 0; i < n_prior; ++i) trace.xs.push_back(prior.sample_uniform());
  trace.omega.assign(n_prior, std::numeric_limits<double>::quiet_NaN());
  trace.holdout.resize(n_prior);
  trace.test.resize(n_prior);
  parallel_for(n_prior, [&](std::size_t i) {
    std::tie(trace.holdout[i], trace.test[i]) = evaluate(trace.xs[i]);
  });

  for (std::size_t j = 0; j < settings.omegas.size(); ++j) {
    const double w = settings.omegas[j];
    std::vector<std::vector<double>> xs(trace.xs.begin(), trace.xs.begin() + static_cast<std::ptrdiff_t>(n_prior));
    std::vector<double> ys;
    for (std::size_t i = 0; i < n_prior; ++i) ys.push_back(trace.holdout[i].loss + w * trace.holdout[i].bias);
    TpeOptimizer tpe(lo, hi, settings.seed + 0x9e3779b9ULL * (j + 1), settings.tpe);
    for (int t = 0; t < settings.n_bo; ++t) {
      auto x = tpe.propose(xs, ys);
      auto [h, te] = evaluate(x);
      xs.push_back(x);
      ys.push_back(h.loss + w * h.bias);
      trace.xs.push_back(std::move(x));
      trace.omega.push_back(w);
      trace.holdout.push_back(h);
      trace.test.push_back(te);
    }
    trace.surrogate_fallbacks += tpe.fallbacks();
  }
  return trace;
}

namespace {

Frontier assemble(const SearchTrace& trace, const std::function<nlohmann::json(std::span<const double>)>& gamma,
                  bool envelope) {
  Frontier f;
  std::map<std::vector<double>, std::size_t> seen;
  std::vector<BiasLoss> pts;
  std::vector<std::size_t> pts_index;
  for (std::size_t i = 0; i < trace.xs.size(); ++i) {
    FrontierPoint p;
    p.gamma = gamma(trace.xs[i]);
    p.omega = trace.omega[i];
    p.source = std::isnan(p.omega) ? "prior" : "bo";
    p.holdout = trace.holdout[i];
    p.test = trace.test[i];
    p.duplicate = !seen.emplace(trace.xs[i], i).second;
    if (!p.duplicate) {
      pts.push_back({p.test.bias, p.test.loss});
      pts_index.push_back(i);
    }
    f.points.push_back(std::move(p));
  }
  for (std::size_t k : pareto_extract(pts)) f.frontier_indices.push_back(pts_index[k]);
  if (envelope)
    for (std::size_t k : convex_envelope(pts)) f.envelope_indices.push_back(pts_index[k]);
  std::sort(f.frontier_indices.begin(), f.frontier_indices.end());
  if (trace.surrogate_fallbacks > 0)
    f.warnings.push_back(std::to_string(trace.surrogate_fallbacks) +
                         " surrogate proposals fell back to uniform draws");
  return f;
}

nlohmann::json split_json(const DataSplits& s) {
  auto rows = [](const Dataset* d) { return d ? nlohmann::json(d->rows()) : nlohmann::json(nullptr); };
  return {{"train_rows", rows(s.train)}, {"holdout_rows", rows(s.holdout)}, {"test_rows", rows(s.test)}};
}

}  // namespace

Frontier run_algorithm1(std::shared_ptr<const Model> base, const DataSplits& splits,
                        const PartitionSpec& partition, int favorable_sign,
                        const SearchSpace& space) {
  if (!splits.holdout || !splits.test) throw ValidationError("algorithm needs holdout and test splits");
  space.settings.validate();
  const Dataset& holdout = *splits.holdout;
  const Dataset& test = *splits.test;
  PostProcessObjective obj(base, holdout, test, assign_cells(partition, holdout),
                           assign_cells(partition, test), favorable_sign, space.calibrate);
  ParamCodec codec(space.transforms, holdout);
  const auto indices = codec.indices();
  auto evaluate = [&](std::span<const double> x) {
    const auto params = codec.decode(x);
    build_postprocessed(base, indices, params, &holdout);
    return std::pair{obj.evaluate_holdout(params), obj.evaluate_test(params)};
  };
  const auto trace = run_search(codec.lo(), codec.hi(), evaluate, space.settings);
  auto f = assemble(trace, [&](std::span<const double> x) { return codec.decode(x).to_json(); },
                    space.settings.convex_envelope);
  std::size_t failed = 0;
  for (const auto& p : f.points) failed += p.holdout.calibration_failed;
  if (failed) f.warnings.push_back(std::to_string(failed) + " evaluations used the uncalibrated model");
  auto specs = nlohmann::json::array();
  for (const auto& s : space.transforms) specs.push_back(s.to_json());
  const auto bh = obj.base_holdout(), bt = obj.base_test();
  f.manifest = {{"mode", "postprocess"},
                {"settings", space.settings.to_json()},
                {"transforms", specs},
                {"calibrate", space.calibrate},
                {"favorable_sign", favorable_sign},
                {"splits", split_json(splits)},
                {"base", {{"holdout", metrics_json(bh)}, {"test", metrics_json(bt)}}}};
  return f;
}

GbmConfig decode_gbm(std::span<const double> x, const GbmBounds& b) {
  GbmConfig c;
  c.n_estimators = static_cast<int>(std::lround(x[0]));
  c.max_leaves = static_cast<int>(std::lround(x[1]));
  c.max_depth = static_cast<int>(std::lround(x[2]));
  c.learning_rate = x[3];
  c.min_samples_leaf = b.min_samples_leaf;
  return c;
}

BaselineResult run_hyperparam_baseline(const DataSplits& splits, const GbmBounds& bounds,
                                       const PartitionSpec& partition, int favorable_sign,
                                       const SearchSettings& settings) {
  if (!splits.train || !splits.holdout || !splits.test)
    throw ValidationError("baseline needs train, holdout and test splits");
  const std::vector<double> lo{double(bounds.n_estimators_lo), double(bounds.max_leaves_lo),
                               double(bounds.max_depth_lo), bounds.learning_rate_lo};
  const std::vector<double> hi{double(bounds.n_estimators_hi), double(bounds.max_leaves_hi),
                               double(bounds.max_depth_hi), bounds.learning_rate_hi};
  const auto hc = assign_cells(partition, *splits.holdout);
  const auto tc = assign_cells(partition, *splits.test);
  auto score = [&](const Model& m, const Dataset& d, const CellRows& cells) {
    const auto s = predict_all(m, d);
    return Metrics{log_loss(d.y(), s), model_bias(s, d.g(), cells, favorable_sign).total, false};
  };
  auto evaluate = [&](std::span<const double> x) {
    const auto model = train_gbm(*splits.train, decode_gbm(x, bounds));
    return std::pair{score(model, *splits.holdout, hc), score(model, *splits.test, tc)};
  };
  const auto trace = run_search(lo, hi, evaluate, settings);
  BaselineResult out;
  out.frontier = assemble(trace, [&](std::span<const double> x) { return decode_gbm(x, bounds).to_json(); },
                          settings.convex_envelope);
  out.frontier.manifest = {{"mode", "hyperparameter_baseline"},
                           {"settings", settings.to_json()},
                           {"gbm_bounds", bounds.to_json()},
                           {"favorable_sign", favorable_sign},
                           {"splits", split_json(splits)}};
  std::size_t best = trace.xs.size();
  for (std::size_t i = 0; i < trace.xs.size(); ++i) {
    if (!(std::isnan(trace.omega[i]) || trace.omega[i] == 0.0)) continue;
    if (best == trace.xs.size() || trace.holdout[i].loss < trace.holdout[best].loss) best = i;
  }
  out.best_config = decode_gbm(trace.xs[best], bounds);
  out.best_model = std::make_shared<GbmModel>(train_gbm(*splits.train, out.best_config));
  return out;
}

}  // namespace fairpost
