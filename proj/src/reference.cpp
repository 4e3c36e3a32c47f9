#include "sshl/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace sshl::reference {

namespace {

double entry(const KernelDescriptor& kernel, const Matrix& x, Eigen::Index i, const Matrix& y, Eigen::Index j) {
  const Eigen::Index d = x.cols();
  double xy = 0.0, xx = 0.0, yy = 0.0, dist = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    xy += x(i, k) * y(j, k);
    xx += x(i, k) * x(i, k);
    yy += y(j, k) * y(j, k);
    dist += (x(i, k) - y(j, k)) * (x(i, k) - y(j, k));
  }
  if (const auto* g = std::get_if<Gaussian>(&kernel)) return std::exp(-dist / (2.0 * g->sigma * g->sigma));
  if (const auto* g = std::get_if<GaussianGamma>(&kernel)) return std::exp(-g->gamma * dist);
  double q = xy, qx = xx, qy = yy;
  if (const auto* p = std::get_if<NormalizedPolynomial>(&kernel)) {
    q = std::pow(xy + p->bias, p->degree);
    qx = std::pow(xx + p->bias, p->degree);
    qy = std::pow(yy + p->bias, p->degree);
  }
  if (qx == 0.0 && qy == 0.0) return 1.0;
  if (qx == 0.0 || qy == 0.0) return 0.0;
  return q / std::sqrt(qx * qy);
}

}  // namespace

Matrix gram_matrix(const KernelDescriptor& kernel, const Matrix& x, const Matrix& y) {
  Matrix k(x.rows(), y.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < y.rows(); ++j) k(i, j) = entry(kernel, x, i, y, j);
  }
  return k;
}

std::vector<std::size_t> rank_by_hamming(const HashCode& query, const std::vector<HashCode>& database) {
  std::vector<std::pair<std::size_t, std::size_t>> keyed;
  keyed.reserve(database.size());
  const auto q = query.signs();
  for (std::size_t i = 0; i < database.size(); ++i) keyed.emplace_back(naive_hamming(q, database[i].signs()), i);
  std::stable_sort(keyed.begin(), keyed.end());
  std::vector<std::size_t> out;
  out.reserve(keyed.size());
  for (const auto& [d, i] : keyed) out.push_back(i);
  return out;
}

std::size_t naive_hamming(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i] ? 1 : 0;
  return d;
}

DecisionMatrix decision_matrix(const Model& model, const Matrix& standardized_queries) {
  DecisionMatrix f(standardized_queries.rows(), static_cast<Eigen::Index>(model.num_bits()));
  for (Eigen::Index q = 0; q < standardized_queries.rows(); ++q) {
    for (std::size_t b = 0; b < model.num_bits(); ++b) {
      const BitFunction& fb = model.bits[b];
      double v = fb.beta;
      for (std::size_t m = 0; m < model.num_kernels(); ++m) {
        for (Eigen::Index n = 0; n < fb.eta.size(); ++n) {
          v += fb.theta[static_cast<Eigen::Index>(m)] * fb.eta[n] *
               entry(model.kernels[m], model.training_features, n, standardized_queries, q);
        }
      }
      f(q, static_cast<Eigen::Index>(b)) = v;
    }
  }
  return f;
}

}  // namespace sshl::reference
