#include "cli_support.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fairpost/error.h"
#include "fairpost/gbm.h"
#include "fairpost/logistic.h"

namespace fairpost::cli {

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::shared_ptr<const Model> load_model(const std::string& path, const Dataset* data) {
  const auto j = read_json(path);
  const auto kind = j.value("kind", "");
  std::shared_ptr<const Model> model;
  std::vector<std::string> names;
  if (kind == "gbm") {
    auto m = std::make_shared<GbmModel>(GbmModel::from_json(j));
    names = m->names();
    model = m;
  } else if (kind == "logistic") {
    auto m = std::make_shared<LogisticModel>(LogisticModel::from_json(j));
    names = m->names();
    model = m;
  } else {
    throw ValidationError(path + ": unknown model kind '" + kind + "'");
  }
  if (data && names != data->names())
    throw ValidationError("model predictors do not match the dataset columns");
  return model;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

namespace {

double to_double(const std::string& s) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
    throw ValidationError("not a number: '" + s + "'");
  return v;
}

}  // namespace

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(to_double(item));
  return out;
}

std::vector<double> parse_grid(const std::string& s) {
  if (s.find(':') == std::string::npos) {
    auto v = parse_doubles(s);
    if (v.empty()) throw ValidationError("empty grid");
    return v;
  }
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() < 2 || parts.size() > 3) throw ValidationError("grid must be lo:hi[:step]");
  const double lo = to_double(parts[0]);
  const double hi = to_double(parts[1]);
  const double step = parts.size() == 3 ? to_double(parts[2]) : 1.0;
  if (!(step > 0.0) || hi < lo) throw ValidationError("grid needs lo <= hi and a positive step");
  std::vector<double> out;
  // Index-based so that rounding never drops the upper end.
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long k = 0; k <= n; ++k) out.push_back(lo + static_cast<double>(k) * step);
  return out;
}

std::vector<std::size_t> resolve_predictors(const Dataset& data, const std::string& list) {
  std::vector<std::size_t> idx;
  for (const auto& name : split_list(list)) idx.push_back(data.index_of(name));
  if (idx.empty()) throw ValidationError("no predictors given");
  return idx;
}

PartitionSpec parse_partition(const std::string& name, const std::vector<double>& eo_weights) {
  if (name == "sp") return PartitionSpec::statistical_parity();
  if (name == "eo") {
    if (eo_weights.size() != 2) throw ValidationError("--eo-weights needs two values");
    return PartitionSpec::equalized_odds(eo_weights[0], eo_weights[1]);
  }
  throw ValidationError("unknown partition '" + name + "' (sp or eo)");
}

std::string manifest_path(const std::string& out, const std::string& explicit_path) {
  return explicit_path.empty() ? out + ".manifest.json" : explicit_path;
}

nlohmann::json manifest_base(const std::string& command, const std::vector<std::string>& argv) {
  return {{"tool", "fairpost"}, {"version", FAIRPOST_VERSION}, {"command", command}, {"argv", argv}};
}

}  // namespace fairpost::cli
