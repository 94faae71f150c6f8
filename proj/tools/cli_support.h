#ifndef FAIRPOST_TOOLS_CLI_SUPPORT_H_
#define FAIRPOST_TOOLS_CLI_SUPPORT_H_

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairpost/bias.h"
#include "fairpost/dataset.h"
#include "fairpost/model.h"

namespace fairpost::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

// gbm or logistic model file written by `fairpost train`. The dataset's
// predictor names must match the model's, in order.
std::shared_ptr<const Model> load_model(const std::string& path, const Dataset* data = nullptr);
nlohmann::json read_json(const std::string& path);
void write_text(const std::string& path, const std::string& text);

std::vector<std::string> split_list(const std::string& s);
std::vector<double> parse_doubles(const std::string& s);
// "lo:hi" or "lo:hi:step" (inclusive) or a comma list.
std::vector<double> parse_grid(const std::string& s);
std::vector<std::size_t> resolve_predictors(const Dataset& data, const std::string& list);

// sp or eo; eo takes the two cell weights.
PartitionSpec parse_partition(const std::string& name, const std::vector<double>& eo_weights);

std::string manifest_path(const std::string& out, const std::string& explicit_path);
// Common manifest header: command, argv (enough for `fairpost replay`) and
// the library version.
nlohmann::json manifest_base(const std::string& command, const std::vector<std::string>& argv);

}  // namespace fairpost::cli

#endif  // FAIRPOST_TOOLS_CLI_SUPPORT_H_
