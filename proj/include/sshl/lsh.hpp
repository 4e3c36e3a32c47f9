#pragma once

// Random-hyperplane LSH baseline: bit b = sgn(<w_b, x>), w_b ~ N(0, I).

#include "sshl/core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sshl {

struct LshModel {
  Matrix projections;  // B x D
  Standardization standardization;
  std::uint64_t seed = 0;

  std::size_t bits() const { return static_cast<std::size_t>(projections.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(projections.cols()); }
};

/// Rows drawn from a seeded mt19937_64 through std::normal_distribution, row
/// major. Standardization defaults to the identity.
LshModel lsh_train(std::size_t dim, std::size_t bits, std::uint64_t seed);

std::vector<HashCode> lsh_hash(const LshModel& model, const Matrix& queries);

/// Flat little-endian file: "SLSH", version byte, B, D (u32), seed (u64),
/// projections (B x D f64), mean (D f64), scale (D f64).
void save_lsh_model(const LshModel& model, const std::string& path);
LshModel load_lsh_model(const std::string& path);

}  // namespace sshl
