#include "sshl/hasher.hpp"

#include "sshl/kernels.hpp"

#include <algorithm>
#include <string>

namespace sshl {

namespace {
constexpr Eigen::Index kQueryBlock = 1024;
}

DecisionMatrix decision_matrix(const Model& model, const Matrix& queries) {
  if (static_cast<std::size_t>(queries.cols()) != model.dim()) {
    throw DimensionError("queries have " + std::to_string(queries.cols()) + " features, model expects " +
                         std::to_string(model.dim()));
  }
  const Matrix x = model.standardization.apply(queries);
  const auto nbits = static_cast<Eigen::Index>(model.num_bits());
  DecisionMatrix f(x.rows(), nbits);

  // kernels that every bit has switched off need not be evaluated
  std::vector<std::size_t> used;
  for (std::size_t m = 0; m < model.num_kernels(); ++m) {
    const auto mi = static_cast<Eigen::Index>(m);
    if (std::any_of(model.bits.begin(), model.bits.end(), [&](const BitFunction& b) { return b.theta[mi] != 0.0; })) {
      used.push_back(m);
    }
  }

  for (Eigen::Index start = 0; start < x.rows(); start += kQueryBlock) {
    const Eigen::Index len = std::min(kQueryBlock, x.rows() - start);
    const Matrix block = x.middleRows(start, len);
    std::vector<Matrix> cross;
    cross.reserve(used.size());
    for (std::size_t m : used) cross.push_back(gram_matrix(model.kernels[m], model.training_features, block));

#pragma omp parallel for schedule(static)
    for (Eigen::Index b = 0; b < nbits; ++b) {
      const BitFunction& fb = model.bits[static_cast<std::size_t>(b)];
      Vector col = Vector::Constant(len, fb.beta);
      for (std::size_t u = 0; u < used.size(); ++u) {
        const double theta = fb.theta[static_cast<Eigen::Index>(used[u])];
        if (theta != 0.0) col.noalias() += theta * (cross[u].transpose() * fb.eta);
      }
      f.block(start, b, len, 1) = col;
    }
  }
  return f;
}

std::vector<HashCode> hash(const Model& model, const Matrix& queries) { return signs_of(decision_matrix(model, queries)); }

std::vector<int> classify(const Codebook& codebook, const std::vector<HashCode>& codes) {
  std::vector<int> out(codes.size());
  for (std::size_t i = 0; i < codes.size(); ++i) out[i] = static_cast<int>(codebook.nearest(codes[i]));
  return out;
}

std::vector<int> classify(const Model& model, const Matrix& queries) {
  return classify(model.codebook, hash(model, queries));
}

long label_value(const Model& model, int group) {
  if (group < 0 || static_cast<std::size_t>(group) >= model.groups()) throw DimensionError("group index out of range");
  if (model.label_values.empty()) return group + 1;
  return model.label_values[static_cast<std::size_t>(group)];
}

double distortion(const Model& model, const Dataset& data) {
  if (model.groups() != static_cast<std::size_t>(data.groups)) {
    throw ConfigError("model has " + std::to_string(model.groups()) + " groups but dataset declares " +
                      std::to_string(data.groups));
  }
  return distortion(decision_matrix(model, data.features), model.codebook, data);
}

double surrogate_loss(const Model& model, const Dataset& data, const Assignment& assignment) {
  return surrogate_loss(decision_matrix(model, data.features), model.codebook, assignment);
}

}  // namespace sshl
