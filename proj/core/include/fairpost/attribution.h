#ifndef FAIRPOST_ATTRIBUTION_H_
#define FAIRPOST_ATTRIBUTION_H_

// Bias explanations: how much of the model bias each predictor carries.
//
//  * basic explanations transport the G-class distributions of one
//    explainer column, beta_i = Bias(E_i | G), split into beta_i^+-;
//  * the Shapley bias game takes v^+-(S) = signed transport of the group
//    explanation of S and splits each Shapley value by sign into
//    bpp/bpm (of v^+) and bmp/bmm (of v^-);
//  * expected IBEs average the bias of ICE sections over anchors.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairpost/bias.h"
#include "fairpost/dataset.h"
#include "fairpost/explain.h"
#include "fairpost/model.h"

namespace fairpost {

enum class AttributionKind { pdp, shapley, shapley_game, ibe };

std::string to_string(AttributionKind kind);

struct Attribution {
  std::string predictor;
  double beta = 0.0;
  double beta_pos = 0.0;
  double beta_neg = 0.0;
  double net = 0.0;
  bool has_atoms = false;
  double bpp = 0.0;
  double bpm = 0.0;
  double bmp = 0.0;
  double bmm = 0.0;
};

struct AttributionTable {
  AttributionKind kind = AttributionKind::pdp;
  std::vector<Attribution> rows;
  std::vector<std::string> notes;

  double total_beta() const;
  // predictor,kind,beta,beta_pos,beta_neg,net,bpp,bpm,bmp,bmm; atom columns
  // are empty for kinds without atoms.
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

AttributionTable basic_bias_explanations(const ExplainerOutput& explainer,
                                         std::span<const std::string> names,
                                         std::span<const int> g, const CellRows& cells,
                                         int favorable_sign = 1);

enum class GroupExplainer {
  shapley_sum,  // E_S = sum_{i in S} phi_i
  game_value,   // E_S = v(S; x)
};

std::string to_string(GroupExplainer group);
GroupExplainer parse_group_explainer(const std::string& s);

inline constexpr std::size_t kMaxBiasGamePredictors = 10;

struct BiasGameOptions {
  ShapleyMode mode = ShapleyMode::exact;
  GroupExplainer group = GroupExplainer::shapley_sum;
  // Sampled mode: permutations for both the row explainer and the bias game.
  int n_permutations = 64;
  std::uint64_t seed = 0;
};

// Sampled mode always uses the shapley_sum group explainer and says so in
// the table notes.
AttributionTable shapley_bias_game(const Model& model, const Dataset& data,
                                   const Dataset& background, const CellRows& cells,
                                   int favorable_sign = 1, const BiasGameOptions& options = {});

struct IbeResult {
  double beta = 0.0;
  double beta_pos = 0.0;
  double beta_neg = 0.0;
  std::vector<std::size_t> anchors;
};

inline constexpr std::uint64_t kDefaultAnchorSeed = 0xa11cULL;

// Average over anchors x_{-i} (fixed-seed rows of `data`) of the bias of
// t -> f(t, x_{-i}) evaluated on column i of `data`.
IbeResult expected_ibe(const Model& model, const Dataset& data, std::size_t i,
                       std::size_t n_anchors, const CellRows& cells, int favorable_sign = 1,
                       std::uint64_t seed = kDefaultAnchorSeed);

AttributionTable expected_ibe_table(const Model& model, const Dataset& data,
                                    std::size_t n_anchors, const CellRows& cells,
                                    int favorable_sign = 1,
                                    std::uint64_t seed = kDefaultAnchorSeed);

struct ImpactList {
  std::vector<std::size_t> M;
  std::vector<std::size_t> N_plus;
  std::vector<std::size_t> N_minus;
  std::vector<std::size_t> M_plus;
  std::vector<std::size_t> M_minus;
  std::vector<std::size_t> M_zero;
  double eps_plus = 0.0;
  double eps_minus = 0.0;
  std::vector<std::string> warnings;

  nlohmann::json to_json(std::span<const std::string> names = {}) const;
};

struct SelectOptions {
  // Default: 5% of the total attribution mass sum_i beta_i.
  std::optional<double> eps_plus;
  std::optional<double> eps_minus;
  // Keep only the top m_star of N_+ and of N_- (by beta^+ and beta^-).
  std::optional<std::size_t> m_star;
  // i goes to M_+ when beta^+ >= ratio * beta^-, to M_- symmetrically.
  double ratio = 4.0;
};

inline constexpr double kDefaultEpsFraction = 0.05;

ImpactList select_impactful(const AttributionTable& table, const SelectOptions& options = {});

}  // namespace fairpost

#endif  // FAIRPOST_ATTRIBUTION_H_
