#include "synthetic.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace sshl::testing {

Dataset with_labels(Matrix features, const std::vector<int>& groups, int group_count) {
  Dataset d;
  d.features = std::move(features);
  d.groups = group_count;
  for (int g = 0; g < group_count; ++g) d.label_values.push_back(g + 1);
  for (int g : groups) d.labels.emplace_back(g);
  return d;
}

Dataset gaussian_blobs(std::size_t n, std::size_t dim, int groups, double separation, double spread,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> centre(-separation, separation);
  std::normal_distribution<double> noise(0.0, spread);
  Matrix centres(groups, static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < centres.size(); ++i) centres.data()[i] = centre(rng);
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  std::vector<int> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = static_cast<int>(i % static_cast<std::size_t>(groups));
    for (std::size_t d = 0; d < dim; ++d) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) =
          centres(g[i], static_cast<Eigen::Index>(d)) + noise(rng);
    }
  }
  return with_labels(std::move(x), g, groups);
}

namespace {

using Stroke = std::array<std::array<double, 2>, 8>;

// Rough pen trajectories on the unit square, one per digit.
const std::array<Stroke, 10> kTemplates{{
    {{{0.5, 1.0}, {0.15, 0.8}, {0.1, 0.4}, {0.3, 0.0}, {0.7, 0.0}, {0.9, 0.4}, {0.85, 0.8}, {0.5, 1.0}}},
    {{{0.3, 0.8}, {0.5, 1.0}, {0.5, 0.85}, {0.5, 0.7}, {0.5, 0.5}, {0.5, 0.3}, {0.5, 0.15}, {0.5, 0.0}}},
    {{{0.1, 0.8}, {0.4, 1.0}, {0.8, 0.9}, {0.8, 0.6}, {0.5, 0.35}, {0.1, 0.0}, {0.5, 0.0}, {0.9, 0.0}}},
    {{{0.1, 0.9}, {0.6, 1.0}, {0.8, 0.75}, {0.4, 0.55}, {0.8, 0.35}, {0.8, 0.1}, {0.5, 0.0}, {0.1, 0.1}}},
    {{{0.7, 0.0}, {0.7, 0.4}, {0.7, 0.8}, {0.7, 1.0}, {0.4, 0.6}, {0.1, 0.35}, {0.5, 0.35}, {0.9, 0.35}}},
    {{{0.9, 1.0}, {0.2, 1.0}, {0.15, 0.6}, {0.6, 0.65}, {0.85, 0.4}, {0.7, 0.05}, {0.4, 0.0}, {0.1, 0.1}}},
    {{{0.8, 1.0}, {0.4, 0.8}, {0.15, 0.4}, {0.2, 0.05}, {0.6, 0.0}, {0.8, 0.25}, {0.6, 0.5}, {0.2, 0.4}}},
    {{{0.1, 1.0}, {0.5, 1.0}, {0.9, 1.0}, {0.75, 0.7}, {0.6, 0.45}, {0.5, 0.25}, {0.45, 0.1}, {0.4, 0.0}}},
    {{{0.5, 0.55}, {0.15, 0.8}, {0.5, 1.0}, {0.85, 0.8}, {0.5, 0.55}, {0.1, 0.25}, {0.5, 0.0}, {0.9, 0.25}}},
    {{{0.85, 0.6}, {0.5, 0.5}, {0.15, 0.7}, {0.4, 1.0}, {0.85, 0.9}, {0.85, 0.5}, {0.75, 0.2}, {0.5, 0.0}}},
}};

}  // namespace

Dataset pen_digits(std::size_t n, std::uint64_t seed, double jitter) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> digit(0, 9);
  Matrix x(static_cast<Eigen::Index>(n), 16);
  std::vector<int> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = digit(rng);
    const double angle = 0.15 * gauss(rng);
    const double sx = 1.0 + 0.12 * gauss(rng);
    const double sy = 1.0 + 0.12 * gauss(rng);
    const double shear = 0.12 * gauss(rng);
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    for (int p = 0; p < 8; ++p) {
      const double u = kTemplates[static_cast<std::size_t>(g[i])][static_cast<std::size_t>(p)][0] - 0.5;
      const double v = kTemplates[static_cast<std::size_t>(g[i])][static_cast<std::size_t>(p)][1] - 0.5;
      const double a = sx * (u + shear * v);
      const double b = sy * v;
      const auto row = static_cast<Eigen::Index>(i);
      x(row, 2 * p) = 50.0 + 100.0 * (c * a - s * b + jitter * gauss(rng));
      x(row, 2 * p + 1) = 50.0 + 100.0 * (s * a + c * b + jitter * gauss(rng));
    }
  }
  return with_labels(std::move(x), g, 10);
}

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

}  // namespace sshl::testing
