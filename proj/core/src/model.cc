#include "fairpost/model.h"

#include "fairpost/error.h"

namespace fairpost {

void Model::predict_batch(std::span<const double> rows, std::span<double> out) const {
  const std::size_t n = num_features();
  if (rows.size() != out.size() * n) throw ValidationError("batch shape mismatch");
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = predict(rows.subspan(r * n, n));
}

std::vector<double> predict_all(const Model& model, const Dataset& data) {
  if (model.num_features() != data.cols())
    throw ValidationError("model expects " + std::to_string(model.num_features()) +
                          " predictors, dataset has " + std::to_string(data.cols()));
  std::vector<double> out(data.rows());
  model.predict_batch(data.values(), out);
  return out;
}

}  // namespace fairpost
