#include "fairpost/attribution.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "fairpost/error.h"
#include "fairpost/parallel.h"

namespace fairpost {

std::string to_string(AttributionKind kind) {
  switch (kind) {
    case AttributionKind::pdp: return "pdp";
    case AttributionKind::shapley: return "shapley";
    case AttributionKind::shapley_game: return "shapley_game";
    case AttributionKind::ibe: return "ibe";
  }
  return "?";
}

std::string to_string(GroupExplainer group) {
  return group == GroupExplainer::shapley_sum ? "shapley_sum" : "game_value";
}

GroupExplainer parse_group_explainer(const std::string& s) {
  if (s == "shapley_sum") return GroupExplainer::shapley_sum;
  if (s == "game_value") return GroupExplainer::game_value;
  throw ValidationError("unknown group explainer '" + s + "'");
}

double AttributionTable::total_beta() const {
  double s = 0.0;
  for (const auto& r : rows) s += r.beta;
  return s;
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Attribution from_bias(const std::string& name, const BiasReport& rep) {
  Attribution a;
  a.predictor = name;
  a.beta = rep.total;
  a.beta_pos = rep.positive;
  a.beta_neg = rep.negative;
  a.net = rep.net;
  return a;
}

}  // namespace

std::string AttributionTable::to_csv() const {
  std::ostringstream os;
  os << "predictor,kind,beta,beta_pos,beta_neg,net,bpp,bpm,bmp,bmm\n";
  for (const auto& r : rows) {
    os << r.predictor << ',' << to_string(kind) << ',' << num(r.beta) << ',' << num(r.beta_pos)
       << ',' << num(r.beta_neg) << ',' << num(r.net);
    if (r.has_atoms)
      os << ',' << num(r.bpp) << ',' << num(r.bpm) << ',' << num(r.bmp) << ',' << num(r.bmm);
    else
      os << ",,,,";
    os << '\n';
  }
  return os.str();
}

nlohmann::json AttributionTable::to_json() const {
  auto arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j{{"predictor", r.predictor}, {"beta", r.beta}, {"beta_pos", r.beta_pos},
                     {"beta_neg", r.beta_neg},   {"net", r.net}};
    if (r.has_atoms) {
      j["bpp"] = r.bpp;
      j["bpm"] = r.bpm;
      j["bmp"] = r.bmp;
      j["bmm"] = r.bmm;
    }
    arr.push_back(std::move(j));
  }
  return {{"kind", to_string(kind)}, {"attributions", arr}, {"notes", notes}};
}

AttributionTable basic_bias_explanations(const ExplainerOutput& explainer,
                                         std::span<const std::string> names,
                                         std::span<const int> g, const CellRows& cells,
                                         int favorable_sign) {
  if (names.size() != explainer.cols) throw ValidationError("predictor names do not match explainer");
  if (g.size() != explainer.rows) throw ValidationError("g does not match explainer rows");
  AttributionTable table;
  switch (explainer.kind) {
    case ExplainerKind::pdp: table.kind = AttributionKind::pdp; break;
    case ExplainerKind::marginal_shapley: table.kind = AttributionKind::shapley; break;
    case ExplainerKind::ice: table.kind = AttributionKind::ibe; break;
  }
  for (std::size_t i = 0; i < explainer.cols; ++i) {
    const auto col = explainer.column(i);
    table.rows.push_back(from_bias(names[i], model_bias(col, g, cells, favorable_sign)));
  }
  return table;
}

namespace {

// Signed transport of the group explanation for coalition `mask`.
std::pair<double, double> bias_game_value(const ExplainerOutput& phi, const CoalitionTable* game,
                                          std::uint64_t mask, std::span<const int> g,
                                          const CellRows& cells, int sign) {
  if (mask == 0) return {0.0, 0.0};
  std::vector<double> e(phi.rows, 0.0);
  if (game) {
    for (std::size_t r = 0; r < phi.rows; ++r) e[r] = game->row(r)[mask];
  } else {
    for (std::size_t r = 0; r < phi.rows; ++r)
      for (std::size_t i = 0; i < phi.cols; ++i)
        if (mask >> i & 1U) e[r] += phi.at(r, i);
  }
  const auto rep = model_bias(e, g, cells, sign);
  return {rep.positive, rep.negative};
}

Attribution from_atoms(const std::string& name, double phi_pos, double phi_neg) {
  Attribution a;
  a.predictor = name;
  a.has_atoms = true;
  a.bpp = std::max(phi_pos, 0.0);
  a.bpm = std::max(-phi_pos, 0.0);
  a.bmp = std::max(phi_neg, 0.0);
  a.bmm = std::max(-phi_neg, 0.0);
  a.beta_pos = a.bpp + a.bmm;
  a.beta_neg = a.bmp + a.bpm;
  a.beta = a.beta_pos + a.beta_neg;
  a.net = a.beta_pos - a.beta_neg;
  return a;
}

}  // namespace

AttributionTable shapley_bias_game(const Model& model, const Dataset& data,
                                   const Dataset& background, const CellRows& cells,
                                   int favorable_sign, const BiasGameOptions& options) {
  const std::size_t n = data.cols();
  AttributionTable table;
  table.kind = AttributionKind::shapley_game;
  std::vector<double> phi_pos(n, 0.0), phi_neg(n, 0.0);

  if (options.mode == ShapleyMode::exact) {
    if (n > kMaxBiasGamePredictors)
      throw ValidationError("exact bias game supports at most " +
                            std::to_string(kMaxBiasGamePredictors) + " predictors");
    const auto game = marginal_game_table(model, data, background);
    ExplainerOutput phi{ExplainerKind::marginal_shapley, data.rows(), n,
                        std::vector<double>(data.rows() * n), background.rows()};
    for (std::size_t r = 0; r < data.rows(); ++r) {
      const auto p = shapley_from_game(game.row(r), n);
      std::copy(p.begin(), p.end(), phi.values.begin() + static_cast<std::ptrdiff_t>(r * n));
    }
    const std::size_t total = std::size_t{1} << n;
    std::vector<double> vpos(total), vneg(total);
    const CoalitionTable* gv = options.group == GroupExplainer::game_value ? &game : nullptr;
    parallel_for(total, [&](std::size_t m) {
      std::tie(vpos[m], vneg[m]) = bias_game_value(phi, gv, m, data.g(), cells, favorable_sign);
    });
    phi_pos = shapley_from_game(vpos, n);
    phi_neg = shapley_from_game(vneg, n);
    table.notes.push_back("exact enumeration; group explainer " + to_string(options.group));
  } else {
    if (options.n_permutations < 1) throw ValidationError("n_permutations must be at least 1");
    ShapleyOptions so{ShapleyMode::sampled, options.n_permutations, options.seed};
    const auto phi = marginal_shapley(model, data, background, so);
    std::map<std::uint64_t, std::pair<double, double>> cache;
    auto value = [&](std::uint64_t m) {
      auto it = cache.find(m);
      if (it != cache.end()) return it->second;
      auto v = bias_game_value(phi, nullptr, m, data.g(), cells, favorable_sign);
      cache.emplace(m, v);
      return v;
    };
    std::mt19937_64 rng(options.seed ^ 0xb1a5ULL);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (int k = 0; k < options.n_permutations; ++k) {
      if (k % 2 == 0)
        std::shuffle(perm.begin(), perm.end(), rng);
      else
        std::reverse(perm.begin(), perm.end());
      std::uint64_t mask = 0;
      auto prev = value(0);
      for (std::size_t j : perm) {
        mask |= std::uint64_t{1} << j;
        const auto cur = value(mask);
        phi_pos[j] += cur.first - prev.first;
        phi_neg[j] += cur.second - prev.second;
        prev = cur;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      phi_pos[i] /= options.n_permutations;
      phi_neg[i] /= options.n_permutations;
    }
    table.notes.push_back("sampled permutations; group explainer shapley_sum (approximation)");
  }
  for (std::size_t i = 0; i < n; ++i) table.rows.push_back(from_atoms(data.names()[i], phi_pos[i], phi_neg[i]));
  return table;
}

IbeResult expected_ibe(const Model& model, const Dataset& data, std::size_t i,
                       std::size_t n_anchors, const CellRows& cells, int favorable_sign,
                       std::uint64_t seed) {
  if (i >= data.cols()) throw ValidationError("predictor index out of range");
  if (n_anchors < 1) throw ValidationError("n_anchors must be at least 1");
  if (data.cols() != model.num_features()) throw ValidationError("dataset width does not match model");
  std::vector<std::size_t> rows(data.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(rows.begin(), rows.end(), rng);
  rows.resize(std::min(n_anchors, rows.size()));

  const auto column = data.column(i);
  std::vector<BiasReport> reps(rows.size());
  parallel_for(rows.size(), [&](std::size_t k) {
    const auto anchor = data.row(rows[k]);
    IceSection section(model, std::vector<double>(anchor.begin(), anchor.end()), i);
    reps[k] = model_bias(section.evaluate(column), data.g(), cells, favorable_sign);
  });
  IbeResult out;
  for (const auto& rep : reps) {
    out.beta += rep.total;
    out.beta_pos += rep.positive;
    out.beta_neg += rep.negative;
  }
  const double m = static_cast<double>(reps.size());
  out.beta /= m;
  out.beta_pos /= m;
  out.beta_neg /= m;
  out.anchors = std::move(rows);
  return out;
}

AttributionTable expected_ibe_table(const Model& model, const Dataset& data,
                                    std::size_t n_anchors, const CellRows& cells,
                                    int favorable_sign, std::uint64_t seed) {
  AttributionTable table;
  table.kind = AttributionKind::ibe;
  for (std::size_t i = 0; i < data.cols(); ++i) {
    const auto r = expected_ibe(model, data, i, n_anchors, cells, favorable_sign, seed);
    Attribution a;
    a.predictor = data.names()[i];
    a.beta = r.beta;
    a.beta_pos = r.beta_pos;
    a.beta_neg = r.beta_neg;
    a.net = r.beta_pos - r.beta_neg;
    table.rows.push_back(a);
  }
  table.notes.push_back("expected IBE over " + std::to_string(std::min(n_anchors, data.rows())) +
                        " anchors");
  return table;
}

nlohmann::json ImpactList::to_json(std::span<const std::string> names) const {
  auto label = [&](const std::vector<std::size_t>& idx) {
    auto arr = nlohmann::json::array();
    for (auto i : idx) {
      if (i < names.size())
        arr.push_back(names[i]);
      else
        arr.push_back(i + 1);
    }
    return arr;
  };
  return {{"M", label(M)},           {"N_plus", label(N_plus)},   {"N_minus", label(N_minus)},
          {"M_plus", label(M_plus)}, {"M_minus", label(M_minus)}, {"M_zero", label(M_zero)},
          {"eps_plus", eps_plus},    {"eps_minus", eps_minus},    {"warnings", warnings}};
}

ImpactList select_impactful(const AttributionTable& table, const SelectOptions& options) {
  const double mass = table.total_beta();
  ImpactList out;
  out.eps_plus = options.eps_plus.value_or(kDefaultEpsFraction * mass);
  out.eps_minus = options.eps_minus.value_or(kDefaultEpsFraction * mass);
  if (out.eps_plus < 0.0 || out.eps_minus < 0.0) throw ValidationError("thresholds must be nonnegative");
  if (!(options.ratio >= 1.0)) throw ValidationError("partition ratio must be at least 1");
  const auto& rows = table.rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].beta_pos > out.eps_plus) out.N_plus.push_back(i);
    if (rows[i].beta_neg > out.eps_minus) out.N_minus.push_back(i);
  }
  if (options.m_star) {
    auto top = [&](std::vector<std::size_t>& idx, auto key) {
      std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return key(a) > key(b); });
      if (idx.size() > *options.m_star) idx.resize(*options.m_star);
    };
    top(out.N_plus, [&](std::size_t i) { return rows[i].beta_pos; });
    top(out.N_minus, [&](std::size_t i) { return rows[i].beta_neg; });
  }
  std::vector<std::size_t> m = out.N_plus;
  m.insert(m.end(), out.N_minus.begin(), out.N_minus.end());
  std::sort(m.begin(), m.end());
  m.erase(std::unique(m.begin(), m.end()), m.end());
  out.M = m;
  for (std::size_t i : out.M) {
    const double bp = rows[i].beta_pos, bn = rows[i].beta_neg;
    if (bp >= options.ratio * bn)
      out.M_plus.push_back(i);
    else if (bn >= options.ratio * bp)
      out.M_minus.push_back(i);
    else
      out.M_zero.push_back(i);
  }
  if (out.M.empty())
    out.warnings.push_back("no predictor exceeds the thresholds; the impactful list M is empty");
  return out;
}

}  // namespace fairpost
