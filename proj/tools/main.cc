// fairpost: bias measurement, bias explanations and post-processing
// mitigation from the command line.
//
// Every subcommand writes <out>.manifest.json (or --manifest) holding the
// resolved settings and the argument vector; `fairpost replay <manifest>`
// re-runs it. Exit codes: 0 ok, 2 invalid input, 3 numerical failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cli_support.h"
#include "fairpost/attribution.h"
#include "fairpost/bias.h"
#include "fairpost/calibrate.h"
#include "fairpost/dataset.h"
#include "fairpost/error.h"
#include "fairpost/explain.h"
#include "fairpost/gbm.h"
#include "fairpost/logistic.h"
#include "fairpost/metrics.h"
#include "fairpost/mitigate.h"
#include "fairpost/parallel.h"
#include "fairpost/synthetic.h"
#include "fairpost/transform.h"

namespace fp = fairpost;
namespace cli = fairpost::cli;
using nlohmann::json;

namespace {

struct Common {
  std::string out;
  std::string manifest;
  int sign = 1;
  std::string partition = "sp";
  std::string eo_weights = "0.5,0.5";
};

void add_out(CLI::App* sub, Common& c) {
  sub->add_option("--out,-o", c.out, "Output file")->required();
  sub->add_option("--manifest", c.manifest, "Manifest path (default <out>.manifest.json)");
}

void add_bias_flags(CLI::App* sub, Common& c) {
  sub->add_option("--sign", c.sign, "Favorable direction of the score: +1 or -1")
      ->check(CLI::IsMember({-1, 1}));
  sub->add_option("--partition", c.partition, "sp (statistical parity) or eo (equalized odds)")
      ->check(CLI::IsMember({"sp", "eo"}));
  sub->add_option("--eo-weights", c.eo_weights, "Cell weights for eo, Y=0 then Y=1");
}

fp::PartitionSpec partition_of(const Common& c) {
  return cli::parse_partition(c.partition, cli::parse_doubles(c.eo_weights));
}

void finish(const Common& c, json manifest) {
  manifest["out"] = c.out;
  const auto path = cli::manifest_path(c.out, c.manifest);
  cli::write_text(path, manifest.dump(2) + "\n");
}

json report_json(const fp::BiasReport& r, const fp::CellRows& cells) {
  auto per = json::array();
  for (std::size_t m = 0; m < r.per_cell.size(); ++m) {
    per.push_back({{"name", r.cell_names[m]},
                   {"weight", cells.weights[m]},
                   {"total", r.per_cell[m].total},
                   {"positive", r.per_cell[m].positive_part},
                   {"negative", r.per_cell[m].negative_part}});
  }
  return {{"total", r.total},       {"positive", r.positive}, {"negative", r.negative},
          {"net", r.net},           {"cells", per},           {"favorable_sign", r.favorable_sign},
          {"warnings", r.warnings}};
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  Common c;
  std::string model = "M1";
  std::size_t n = 10000;
  double p_protected = 0.5;
  std::uint64_t seed = 0;
};

void cmd_generate(const GenerateArgs& a, const std::vector<std::string>& argv) {
  fp::SyntheticSpec spec;
  spec.model = fp::parse_synthetic_model(a.model);
  spec.n_rows = a.n;
  spec.p_protected = a.p_protected;
  spec.seed = a.seed;
  const auto data = fp::generate(spec);
  fp::write_csv(data, a.c.out);
  auto m = cli::manifest_base("generate", argv);
  m["settings"] = {{"model", fp::to_string(spec.model)},
                   {"n", spec.n_rows},
                   {"p_protected", spec.p_protected},
                   {"seed", spec.seed}};
  finish(a.c, m);
}

// ------------------------------------------------------------------- train

struct TrainArgs {
  Common c;
  std::string data;
  std::string algo = "gbm";
  fp::GbmConfig gbm;
};

void cmd_train(const TrainArgs& a, const std::vector<std::string>& argv) {
  const auto data = fp::read_csv(a.data);
  auto m = cli::manifest_base("train", argv);
  m["inputs"] = {{"data", a.data}, {"rows", data.rows()}};
  std::vector<double> scores;
  if (a.algo == "gbm") {
    a.gbm.validate();
    const auto model = fp::train_gbm(data, a.gbm);
    cli::write_text(a.c.out, model.to_json().dump() + "\n");
    scores = fp::predict_all(model, data);
    m["settings"] = {{"algo", "gbm"}, {"gbm", a.gbm.to_json()}};
  } else {
    const auto t = fp::train_logistic(data);
    cli::write_text(a.c.out, t.model.to_json().dump() + "\n");
    scores = fp::predict_all(t.model, data);
    m["settings"] = {{"algo", "logistic"}};
    m["fit"] = {{"iterations", t.fit.iterations}, {"converged", t.fit.converged},
                {"separated", t.fit.separated},   {"ridge", t.fit.ridge},
                {"std_err", t.fit.std_err}};
    m["warnings"] = t.warnings;
    for (const auto& w : t.warnings) std::cerr << "warning: " << w << '\n';
  }
  m["train_log_loss"] = fp::log_loss(data.y(), scores);
  finish(a.c, m);
}

// -------------------------------------------------------------------- bias

struct BiasArgs {
  Common c;
  std::string data;
  std::string model;
};

void cmd_bias(const BiasArgs& a, const std::vector<std::string>& argv) {
  const auto data = fp::read_csv(a.data);
  const auto model = cli::load_model(a.model, &data);
  const auto partition = partition_of(a.c);
  const auto cells = fp::assign_cells(partition, data);
  const auto scores = fp::predict_all(*model, data);
  const auto report = fp::model_bias(scores, data.g(), cells, a.c.sign);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  cli::write_text(a.c.out, report_json(report, cells).dump(2) + "\n");
  auto m = cli::manifest_base("bias", argv);
  m["inputs"] = {{"data", a.data}, {"model", a.model}, {"rows", data.rows()}};
  m["settings"] = {{"partition", a.c.partition}, {"cell_weights", cells.weights}, {"sign", a.c.sign}};
  finish(a.c, m);
}

// ----------------------------------------------------------------- explain

struct ExplainArgs {
  Common c;
  std::string data;
  std::string model;
  std::string method = "shapley";
  std::string mode = "exact";
  std::string group = "shapley_sum";
  int permutations = 64;
  std::size_t anchors = 200;
  std::uint64_t anchor_seed = fp::kDefaultAnchorSeed;
  std::size_t background = fp::kDefaultBackgroundRows;
  std::uint64_t background_seed = fp::kDefaultBackgroundSeed;
  std::uint64_t seed = 0;
  std::size_t max_rows = 0;
  double eps = -1.0;
  std::size_t m_star = 0;
};

void cmd_explain(const ExplainArgs& a, const std::vector<std::string>& argv) {
  auto data = fp::read_csv(a.data);
  const auto model = cli::load_model(a.model, &data);
  if (a.max_rows > 0) data = fp::subsample(data, a.max_rows, a.seed);
  const auto cells = fp::assign_cells(partition_of(a.c), data);
  const auto bg = fp::subsample(data, a.background, a.background_seed);
  fp::AttributionTable table;
  if (a.method == "pdp") {
    table = fp::basic_bias_explanations(fp::pdp_all(*model, data, bg), data.names(), data.g(),
                                        cells, a.c.sign);
  } else if (a.method == "shapley") {
    fp::BiasGameOptions o;
    o.mode = a.mode == "sampled" ? fp::ShapleyMode::sampled : fp::ShapleyMode::exact;
    o.group = fp::parse_group_explainer(a.group);
    o.n_permutations = a.permutations;
    o.seed = a.seed;
    table = fp::shapley_bias_game(*model, data, bg, cells, a.c.sign, o);
  } else {
    table = fp::expected_ibe_table(*model, data, a.anchors, cells, a.c.sign, a.anchor_seed);
  }
  cli::write_text(a.c.out, table.to_csv());

  fp::SelectOptions so;
  if (a.eps >= 0.0) so.eps_plus = so.eps_minus = a.eps;
  if (a.m_star > 0) so.m_star = a.m_star;
  const auto impact = fp::select_impactful(table, so);
  for (const auto& w : impact.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& n : table.notes) std::cerr << "note: " << n << '\n';

  auto m = cli::manifest_base("explain", argv);
  m["inputs"] = {{"data", a.data}, {"model", a.model}, {"rows", data.rows()}};
  m["settings"] = {{"method", a.method},         {"mode", a.mode},
                   {"group", a.group},           {"permutations", a.permutations},
                   {"anchors", a.anchors},       {"anchor_seed", a.anchor_seed},
                   {"background_rows", bg.rows()},
                   {"background_seed", a.background_seed},
                   {"seed", a.seed},             {"max_rows", a.max_rows},
                   {"partition", a.c.partition}, {"sign", a.c.sign}};
  m["impact"] = impact.to_json(data.names());
  m["notes"] = table.notes;
  finish(a.c, m);
}

// ---------------------------------------------------------------- mitigate

struct SearchArgs {
  int n_prior = 400;
  int n_bo = 50;
  std::string omegas;
  std::uint64_t seed = 0;
  double tpe_gamma = 0.25;
  int tpe_candidates = 24;
};

void add_search_flags(CLI::App* sub, SearchArgs& s) {
  sub->add_option("--n-prior", s.n_prior, "Prior draws");
  sub->add_option("--n-bo", s.n_bo, "Bayesian-optimization steps per omega");
  sub->add_option("--omegas", s.omegas, "Comma list of penalization weights (default 0,0.1,...,2)");
  sub->add_option("--seed", s.seed, "Search seed");
  sub->add_option("--tpe-gamma", s.tpe_gamma, "TPE good-set quantile");
  sub->add_option("--tpe-candidates", s.tpe_candidates, "TPE candidates per proposal");
}

fp::SearchSettings settings_of(const SearchArgs& s) {
  fp::SearchSettings out;
  out.omegas = s.omegas.empty() ? fp::default_omegas() : cli::parse_doubles(s.omegas);
  out.n_prior = s.n_prior;
  out.n_bo = s.n_bo;
  out.seed = s.seed;
  out.tpe.gamma = s.tpe_gamma;
  out.tpe.n_candidates = s.tpe_candidates;
  out.validate();
  return out;
}

struct TransformArgs {
  std::string predictors;
  std::string kind = "global";
  double a_lo = 0.5;
  double a_hi = 2.0;
  double sigma_lo = 1.0;
  double sigma_hi = 2.0;
  std::string focal = "mean";
};

void add_transform_flags(CLI::App* sub, TransformArgs& t, bool required) {
  auto* o = sub->add_option("--predictors", t.predictors, "Comma list of predictors to transform");
  if (required) o->required();
  sub->add_option("--transform", t.kind, "global, asymmetric or local");
  sub->add_option("--a-lo", t.a_lo, "Lower bound of the compression parameter");
  sub->add_option("--a-hi", t.a_hi, "Upper bound of the compression parameter");
  sub->add_option("--sigma-lo", t.sigma_lo, "Lower bound of the local width");
  sub->add_option("--sigma-hi", t.sigma_hi, "Upper bound of the local width");
  sub->add_option("--focal", t.focal, "Focal rule: mean, median or ks_argmax");
}

std::vector<fp::TransformSpec> specs_of(const TransformArgs& t, const fp::Dataset& data) {
  std::vector<fp::TransformSpec> out;
  for (auto i : cli::resolve_predictors(data, t.predictors)) {
    fp::TransformSpec s;
    s.index = i;
    s.kind = fp::parse_transform_kind(t.kind);
    s.a_lo = t.a_lo;
    s.a_hi = t.a_hi;
    s.sigma_lo = t.sigma_lo;
    s.sigma_hi = t.sigma_hi;
    s.focal_rule = fp::parse_focal_rule(t.focal);
    out.push_back(s);
  }
  return out;
}

struct MitigateArgs {
  Common c;
  std::string data;
  std::string test;
  std::string model;
  double holdout_fraction = 0.5;
  std::uint64_t split_seed = 0;
  bool no_calibrate = false;
  bool envelope = false;
  std::string points_json;
  TransformArgs t;
  SearchArgs s;
};

void cmd_mitigate(const MitigateArgs& a, const std::vector<std::string>& argv) {
  const auto data = fp::read_csv(a.data);
  fp::Dataset holdout, test;
  if (a.test.empty()) {
    const std::vector<double> fr{a.holdout_fraction, 1.0 - a.holdout_fraction};
    auto parts = fp::split(data, fr, a.split_seed);
    holdout = std::move(parts[0]);
    test = std::move(parts[1]);
  } else {
    holdout = data;
    test = fp::read_csv(a.test);
  }
  const auto model = cli::load_model(a.model, &holdout);
  fp::SearchSpace space;
  space.transforms = specs_of(a.t, holdout);
  space.settings = settings_of(a.s);
  space.settings.convex_envelope = a.envelope;
  space.calibrate = !a.no_calibrate;
  const auto f = fp::run_algorithm1(model, {nullptr, &holdout, &test}, partition_of(a.c), a.c.sign,
                                    space);
  cli::write_text(a.c.out, f.to_csv());
  if (!a.points_json.empty()) cli::write_text(a.points_json, f.to_json().dump(2) + "\n");
  for (const auto& w : f.warnings) std::cerr << "warning: " << w << '\n';

  auto m = cli::manifest_base("mitigate", argv);
  m["inputs"] = {{"data", a.data}, {"test", a.test}, {"model", a.model}};
  m["split"] = {{"holdout_fraction", a.holdout_fraction}, {"seed", a.split_seed}};
  m["partition"] = a.c.partition;
  m["run"] = f.manifest;
  m["frontier_size"] = f.frontier_indices.size();
  m["warnings"] = f.warnings;
  finish(a.c, m);
}

// ------------------------------------------------------------------- curve

struct CurveArgs {
  Common c;
  std::string data;
  std::string model;
  std::string predictors;
  std::string grid = "1:15";
  std::string focal = "mean";
};

void cmd_curve(const CurveArgs& a, const std::vector<std::string>& argv) {
  const auto data = fp::read_csv(a.data);
  const auto model = cli::load_model(a.model, &data);
  const auto idx = cli::resolve_predictors(data, a.predictors);
  const auto grid = cli::parse_grid(a.grid);
  const auto rule = fp::parse_focal_rule(a.focal);
  const auto cells = fp::assign_cells(partition_of(a.c), data);
  std::ostringstream csv;
  csv.precision(17);
  csv << "a,total,positive,negative\n";
  for (double av : grid) {
    fp::CompressiveParams params;
    for (auto i : idx) {
      fp::PredictorTransform t;
      t.index = i;
      t.name = data.names()[i];
      t.a = av;
      t.focal_rule = rule;
      t.focal = fp::focal_point(data, i, rule);
      t.validate();
      params.transforms.push_back(t);
    }
    fp::PostProcessedModel pp(model, params);
    const auto r = fp::model_bias(pp.predict_uncalibrated(data), data.g(), cells, a.c.sign);
    csv << av << ',' << r.total << ',' << r.positive << ',' << r.negative << '\n';
  }
  cli::write_text(a.c.out, csv.str());
  auto m = cli::manifest_base("curve", argv);
  m["inputs"] = {{"data", a.data}, {"model", a.model}};
  m["settings"] = {{"predictors", cli::split_list(a.predictors)}, {"grid", grid},
                   {"focal", a.focal}, {"partition", a.c.partition}, {"sign", a.c.sign}};
  finish(a.c, m);
}

// --------------------------------------------------------------- calibrate

struct CalibrateArgs {
  Common c;
  std::string data;
  std::string eval;
  std::string model;
  std::string params;
  std::string gamma;
  std::string method = "link_linear";
};

json scored(const std::vector<double>& s, const fp::Dataset& d, const fp::CellRows& cells, int sign) {
  json j = {{"log_loss", fp::log_loss(d.y(), s)},
            {"bias", fp::model_bias(s, d.g(), cells, sign).total}};
  const bool both = std::any_of(d.y().begin(), d.y().end(), [](int y) { return y == 1; }) &&
                    std::any_of(d.y().begin(), d.y().end(), [](int y) { return y == 0; });
  j["auc"] = both ? json(fp::auc(s, d.y())) : json(nullptr);
  return j;
}

void cmd_calibrate(const CalibrateArgs& a, const std::vector<std::string>& argv) {
  const auto fit = fp::read_csv(a.data);
  const auto eval = a.eval.empty() ? fit : fp::read_csv(a.eval);
  const auto base = cli::load_model(a.model, &fit);
  if (a.params.empty() == a.gamma.empty())
    throw fp::ValidationError("give exactly one of --params and --gamma");
  json pj;
  if (!a.params.empty()) {
    pj = cli::read_json(a.params);
  } else {
    try {
      pj = json::parse(a.gamma);
    } catch (const json::parse_error& e) {
      throw fp::ValidationError(std::string("--gamma: ") + e.what());
    }
  }
  auto params = fp::CompressiveParams::from_json(pj);
  fp::PostProcessedModel pp(base, params);
  const auto post = pp.predict_uncalibrated(fit);
  const auto kind = fp::parse_calibration_kind(a.method);
  std::vector<std::string> warnings;
  const auto map = [&] {
    if (kind == fp::CalibrationKind::link_linear)
      return fp::link_linear_calibrate(post, fp::predict_all(*base, fit));
    if (kind == fp::CalibrationKind::pava) {
      const std::vector<double> y(fit.y().begin(), fit.y().end());
      return fp::pava_isotonic(post, y);
    }
    auto r = fp::logistic_refit(post, fit.y());
    warnings = r.warnings;
    return r.map;
  }();
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';

  const auto cells = fp::assign_cells(partition_of(a.c), eval);
  const auto raw = pp.predict_uncalibrated(eval);
  auto cal = raw;
  map.apply(cal);
  const json out = {{"calibration", map.to_json()},
                    {"params", params.to_json()},
                    {"eval", {{"base", scored(fp::predict_all(*base, eval), eval, cells, a.c.sign)},
                              {"uncalibrated", scored(raw, eval, cells, a.c.sign)},
                              {"calibrated", scored(cal, eval, cells, a.c.sign)}}},
                    {"warnings", warnings}};
  cli::write_text(a.c.out, out.dump(2) + "\n");
  auto m = cli::manifest_base("calibrate", argv);
  m["inputs"] = {{"data", a.data}, {"eval", a.eval}, {"model", a.model}};
  m["settings"] = {{"method", a.method}, {"partition", a.c.partition}, {"sign", a.c.sign}};
  finish(a.c, m);
}

// -------------------------------------------------------- compare-baseline

struct BaselineArgs {
  Common c;
  std::string data;
  std::string split = "0.5,0.25,0.25";
  std::uint64_t split_seed = 0;
  fp::GbmBounds bounds;
  std::string best_model_out;
  std::string postprocess_out;
  TransformArgs t;
  SearchArgs s;
};

double bias_width(const fp::Frontier& f) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (auto i : f.frontier_indices) {
    lo = std::min(lo, f.points[i].test.bias);
    hi = std::max(hi, f.points[i].test.bias);
  }
  return f.frontier_indices.empty() ? 0.0 : hi - lo;
}

void cmd_baseline(const BaselineArgs& a, const std::vector<std::string>& argv) {
  const auto data = fp::read_csv(a.data);
  const auto fr = cli::parse_doubles(a.split);
  if (fr.size() != 3) throw fp::ValidationError("--split needs train,holdout,test fractions");
  const auto parts = fp::split(data, fr, a.split_seed);
  const fp::DataSplits splits{&parts[0], &parts[1], &parts[2]};
  const auto partition = partition_of(a.c);
  const auto settings = settings_of(a.s);
  const auto base = fp::run_hyperparam_baseline(splits, a.bounds, partition, a.c.sign, settings);
  cli::write_text(a.c.out, base.frontier.to_csv());
  if (!a.best_model_out.empty())
    cli::write_text(a.best_model_out, base.best_model->to_json().dump() + "\n");

  auto m = cli::manifest_base("compare-baseline", argv);
  m["inputs"] = {{"data", a.data}};
  m["split"] = {{"fractions", fr}, {"seed", a.split_seed}};
  m["baseline"] = {{"run", base.frontier.manifest},
                   {"best_config", base.best_config.to_json()},
                   {"frontier_bias_width", bias_width(base.frontier)}};
  if (!a.t.predictors.empty()) {
    if (a.postprocess_out.empty())
      throw fp::ValidationError("--predictors needs --postprocess-out");
    fp::SearchSpace space;
    space.transforms = specs_of(a.t, parts[1]);
    space.settings = settings;
    const auto pf = fp::run_algorithm1(base.best_model, splits, partition, a.c.sign, space);
    cli::write_text(a.postprocess_out, pf.to_csv());
    m["postprocess"] = {{"run", pf.manifest}, {"frontier_bias_width", bias_width(pf)}};
  }
  finish(a.c, m);
}

// ------------------------------------------------------------------ driver

void dispatch(CLI::App& app, const std::vector<std::string>& args) {
  std::vector<std::string> storage{"fairpost"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> cargv;
  for (auto& s : storage) cargv.push_back(s.data());
  app.parse(static_cast<int>(cargv.size()), cargv.data());
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"fairpost: model bias measurement, explanation and mitigation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", FAIRPOST_VERSION);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Draw a synthetic dataset (M1..M4)");
  g->add_option("--model", gen.model, "M1, M2, M3 or M4");
  g->add_option("--n", gen.n, "Rows");
  g->add_option("--p-protected", gen.p_protected, "P(G=1)");
  g->add_option("--seed", gen.seed, "Seed");
  add_out(g, gen.c);

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "Train a GBM or logistic model on X -> Y");
  t->add_option("--data", tr.data, "Training CSV")->required();
  t->add_option("--algo", tr.algo, "gbm or logistic")->check(CLI::IsMember({"gbm", "logistic"}));
  t->add_option("--n-estimators", tr.gbm.n_estimators);
  t->add_option("--max-leaves", tr.gbm.max_leaves);
  t->add_option("--max-depth", tr.gbm.max_depth);
  t->add_option("--learning-rate", tr.gbm.learning_rate);
  t->add_option("--min-samples-leaf", tr.gbm.min_samples_leaf);
  t->add_option("--lambda", tr.gbm.lambda);
  t->add_option("--seed", tr.gbm.seed);
  add_out(t, tr.c);

  BiasArgs bi;
  auto* b = app.add_subcommand("bias", "Model bias report (JSON)");
  b->add_option("--data", bi.data)->required();
  b->add_option("--model", bi.model)->required();
  add_bias_flags(b, bi.c);
  add_out(b, bi.c);

  ExplainArgs ex;
  auto* e = app.add_subcommand("explain", "Per-predictor bias explanations (CSV)");
  e->add_option("--data", ex.data)->required();
  e->add_option("--model", ex.model)->required();
  e->add_option("--method", ex.method, "pdp, shapley or ibe")
      ->check(CLI::IsMember({"pdp", "shapley", "ibe"}));
  e->add_option("--mode", ex.mode, "exact or sampled Shapley")
      ->check(CLI::IsMember({"exact", "sampled"}));
  e->add_option("--group", ex.group, "Group explainer: shapley_sum or game_value");
  e->add_option("--permutations", ex.permutations, "Sampled mode permutations");
  e->add_option("--anchors", ex.anchors, "IBE anchors");
  e->add_option("--anchor-seed", ex.anchor_seed);
  e->add_option("--background", ex.background, "Background rows");
  e->add_option("--background-seed", ex.background_seed);
  e->add_option("--seed", ex.seed, "Sampling seed");
  e->add_option("--max-rows", ex.max_rows, "Explain a fixed-seed subsample (0 = all rows)");
  e->add_option("--eps", ex.eps, "Selection threshold for both lists (default 5% of total)");
  e->add_option("--m-star", ex.m_star, "Keep the top m* of each list (0 = all)");
  add_bias_flags(e, ex.c);
  add_out(e, ex.c);

  MitigateArgs mi;
  auto* mt = app.add_subcommand("mitigate", "Bias-performance frontier of post-processed models");
  mt->add_option("--data", mi.data, "Holdout CSV, or data split into holdout and test")->required();
  mt->add_option("--test", mi.test, "Separate test CSV");
  mt->add_option("--model", mi.model)->required();
  mt->add_option("--holdout-fraction", mi.holdout_fraction);
  mt->add_option("--split-seed", mi.split_seed);
  mt->add_flag("--no-calibrate", mi.no_calibrate, "Skip the link-space calibration");
  mt->add_flag("--envelope", mi.envelope, "Also compute the convex envelope");
  mt->add_option("--points-json", mi.points_json, "Write every evaluation as JSON");
  add_transform_flags(mt, mi.t, true);
  add_search_flags(mt, mi.s);
  add_bias_flags(mt, mi.c);
  add_out(mt, mi.c);

  CurveArgs cu;
  auto* c = app.add_subcommand("curve", "Bias versus compression a (CSV a,total,positive,negative)");
  c->add_option("--data", cu.data)->required();
  c->add_option("--model", cu.model)->required();
  c->add_option("--predictors", cu.predictors)->required();
  c->add_option("--a-grid", cu.grid, "lo:hi[:step] or a comma list");
  c->add_option("--focal", cu.focal, "mean, median or ks_argmax");
  add_bias_flags(c, cu.c);
  add_out(c, cu.c);

  CalibrateArgs ca;
  auto* cl = app.add_subcommand("calibrate", "Calibrate a post-processed model");
  cl->add_option("--data", ca.data, "Calibration CSV")->required();
  cl->add_option("--eval", ca.eval, "Evaluation CSV (default: --data)");
  cl->add_option("--model", ca.model)->required();
  cl->add_option("--params", ca.params, "Transform parameters JSON file");
  cl->add_option("--gamma", ca.gamma, "Transform parameters as inline JSON (frontier gamma_json)");
  cl->add_option("--method", ca.method, "link_linear, pava or logistic_refit");
  add_bias_flags(cl, ca.c);
  add_out(cl, ca.c);

  BaselineArgs ba;
  auto* bl = app.add_subcommand("compare-baseline", "Frontier over GBM hyperparameters");
  bl->add_option("--data", ba.data)->required();
  bl->add_option("--split", ba.split, "train,holdout,test fractions");
  bl->add_option("--split-seed", ba.split_seed);
  bl->add_option("--n-estimators-lo", ba.bounds.n_estimators_lo);
  bl->add_option("--n-estimators-hi", ba.bounds.n_estimators_hi);
  bl->add_option("--max-leaves-lo", ba.bounds.max_leaves_lo);
  bl->add_option("--max-leaves-hi", ba.bounds.max_leaves_hi);
  bl->add_option("--max-depth-lo", ba.bounds.max_depth_lo);
  bl->add_option("--max-depth-hi", ba.bounds.max_depth_hi);
  bl->add_option("--learning-rate-lo", ba.bounds.learning_rate_lo);
  bl->add_option("--learning-rate-hi", ba.bounds.learning_rate_hi);
  bl->add_option("--min-samples-leaf", ba.bounds.min_samples_leaf);
  bl->add_option("--best-model-out", ba.best_model_out, "Write the best omega=0 model");
  bl->add_option("--postprocess-out", ba.postprocess_out,
                 "Post-processing frontier of the best model (needs --predictors)");
  add_transform_flags(bl, ba.t, false);
  add_search_flags(bl, ba.s);
  add_bias_flags(bl, ba.c);
  add_out(bl, ba.c);

  std::string replay_path;
  auto* rp = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  rp->add_option("manifest", replay_path)->required();

  try {
    dispatch(app, args);
  } catch (const CLI::ParseError& err) {
    // --help and --version come through here with exit code 0.
    const int code = app.exit(err);
    return code == 0 ? cli::kExitOk : cli::kExitValidation;
  }

  if (*g) cmd_generate(gen, args);
  else if (*t) cmd_train(tr, args);
  else if (*b) cmd_bias(bi, args);
  else if (*e) cmd_explain(ex, args);
  else if (*mt) cmd_mitigate(mi, args);
  else if (*c) cmd_curve(cu, args);
  else if (*cl) cmd_calibrate(ca, args);
  else if (*bl) cmd_baseline(ba, args);
  else if (*rp) {
    const auto j = cli::read_json(replay_path);
    if (!j.contains("argv") || !j["argv"].is_array())
      throw fp::ValidationError(replay_path + " has no argv");
    const auto recorded = j["argv"].get<std::vector<std::string>>();
    if (!recorded.empty() && recorded.front() == "replay")
      throw fp::ValidationError("refusing to replay a replay");
    return run(recorded);
  }
  return cli::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(args);
  } catch (const fp::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitValidation;
  } catch (const fp::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return cli::kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitFailure;
  }
}
