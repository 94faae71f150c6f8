#include "fairpost/dataset.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

#include "fairpost/error.h"

namespace fairpost {

Dataset::Dataset(std::vector<std::string> names, std::vector<double> values, std::vector<int> g,
                 std::vector<int> y)
    : names_(std::move(names)), values_(std::move(values)), g_(std::move(g)), y_(std::move(y)) {
  if (g_.size() != y_.size()) throw ValidationError("g and y have different lengths");
  if (values_.size() != g_.size() * names_.size())
    throw ValidationError("predictor matrix does not match rows x columns");
  for (int v : g_)
    if (v != 0 && v != 1) throw ValidationError("protected attribute must be 0 or 1");
  for (int v : y_)
    if (v != 0 && v != 1) throw ValidationError("response must be 0 or 1");
}

std::vector<double> Dataset::column(std::size_t c) const {
  if (c >= cols()) throw ValidationError("column index out of range");
  std::vector<double> out(rows());
  for (std::size_t r = 0; r < rows(); ++r) out[r] = at(r, c);
  return out;
}

std::size_t Dataset::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw ValidationError("unknown predictor '" + name + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  std::vector<double> values;
  values.reserve(rows.size() * cols());
  std::vector<int> g, y;
  g.reserve(rows.size());
  y.reserve(rows.size());
  for (std::size_t r : rows) {
    if (r >= this->rows()) throw ValidationError("row index out of range");
    auto x = row(r);
    values.insert(values.end(), x.begin(), x.end());
    g.push_back(g_[r]);
    y.push_back(y_[r]);
  }
  return Dataset(names_, std::move(values), std::move(g), std::move(y));
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    out.push_back(cell);
  }
  return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("line " + std::to_string(line_no) + ": not a number: '" + s + "'");
  }
}

}  // namespace

Dataset read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open dataset '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty dataset file '" + path + "'");
  auto header = split_line(line);
  if (header.size() < 3 || header[header.size() - 2] != "g" || header.back() != "y")
    throw ValidationError("dataset header must end with g,y");
  const std::size_t n = header.size() - 2;
  std::vector<std::string> names(header.begin(), header.begin() + static_cast<long>(n));

  std::vector<double> values;
  std::vector<int> g, y;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto cells = split_line(line);
    if (cells.size() != header.size())
      throw ValidationError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " fields");
    for (std::size_t c = 0; c < n; ++c) values.push_back(parse_double(cells[c], line_no));
    g.push_back(static_cast<int>(parse_double(cells[n], line_no)));
    y.push_back(static_cast<int>(parse_double(cells[n + 1], line_no)));
  }
  return Dataset(std::move(names), std::move(values), std::move(g), std::move(y));
}

void write_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  for (const auto& name : data.names()) out << name << ',';
  out << "g,y\n";
  out << std::setprecision(17);
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (double v : data.row(r)) out << v << ',';
    out << data.g()[r] << ',' << data.y()[r] << '\n';
  }
  if (!out) throw ValidationError("write failed for '" + path + "'");
}

std::vector<Dataset> split(const Dataset& data, std::span<const double> fractions,
                           std::uint64_t seed) {
  double sum = 0.0;
  for (double f : fractions) {
    if (f < 0.0) throw ValidationError("negative split fraction");
    sum += f;
  }
  if (fractions.empty() || sum > 1.0 + 1e-12) throw ValidationError("split fractions must sum to <= 1");

  std::vector<std::size_t> order(data.rows());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<Dataset> out;
  std::size_t start = 0;
  for (std::size_t k = 0; k < fractions.size(); ++k) {
    std::size_t count = k + 1 == fractions.size()
                            ? order.size() - start
                            : static_cast<std::size_t>(fractions[k] * static_cast<double>(data.rows()));
    count = std::min(count, order.size() - start);
    out.push_back(data.subset(std::span(order).subspan(start, count)));
    start += count;
  }
  return out;
}

Dataset subsample(const Dataset& data, std::size_t max_rows, std::uint64_t seed) {
  if (data.rows() <= max_rows) return data;
  std::vector<std::size_t> order(data.rows());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(max_rows);
  std::sort(order.begin(), order.end());
  return data.subset(order);
}

}  // namespace fairpost
