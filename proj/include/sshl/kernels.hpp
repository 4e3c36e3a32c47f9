#pragma once

#include "sshl/core.hpp"

#include <span>
#include <string>
#include <vector>

namespace sshl {

/// Throws ConfigError for sigma <= 0, gamma <= 0 or degree < 1.
void validate(const KernelDescriptor& kernel);

/// Kernel value for a single pair of vectors.
double kernel_value(const KernelDescriptor& kernel, std::span<const double> x, std::span<const double> y);

/// Symmetric N x N Gram matrix of the rows of x. The diagonal of normalized
/// and Gaussian kernels is exactly 1 and the result is exactly symmetric.
Matrix gram_matrix(const KernelDescriptor& kernel, const Matrix& x);

/// N x N' cross Gram matrix, entry (i, j) = k(x_i, y_j).
Matrix gram_matrix(const KernelDescriptor& kernel, const Matrix& x, const Matrix& y);

/// Default bank: normalized linear, normalized polynomial (degree 2, bias 1)
/// and Gaussians with sigma in {2^-7, 2^-5, 2^-3, 2^-1, 1, 2, 2^3, 2^5, 2^7}.
std::vector<KernelDescriptor> default_kernel_bank();

/// Comma-separated list: "linear", "poly:<degree>:<bias>", "gauss:<sigma>",
/// "gauss-gamma:<gamma>" or "default".
std::vector<KernelDescriptor> parse_kernel_list(const std::string& text);
std::string to_string(const KernelDescriptor& kernel);

struct KernelBank {
  std::vector<KernelDescriptor> descriptors;
  std::vector<Matrix> grams;

  static KernelBank build(std::vector<KernelDescriptor> descriptors, const Matrix& x);
  std::size_t size() const { return descriptors.size(); }
  Eigen::Index samples() const { return grams.empty() ? 0 : grams.front().rows(); }
};

/// sum_m theta_m K_m + jitter I.
Matrix combine(const Vector& theta, const KernelBank& bank, double jitter = 0.0);

}  // namespace sshl
