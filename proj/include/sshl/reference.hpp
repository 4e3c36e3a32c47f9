#pragma once

// Straightforward serial implementations of the OpenMP kernels. They share no
// code with the parallel paths and exist so tests and benchmarks have
// something independent to compare against.

#include "sshl/core.hpp"

#include <vector>

namespace sshl::reference {

/// Entry-by-entry Gram matrix, no symmetrization shortcuts.
Matrix gram_matrix(const KernelDescriptor& kernel, const Matrix& x, const Matrix& y);

/// Database indices ordered by (Hamming distance, index) via a full sort.
std::vector<std::size_t> rank_by_hamming(const HashCode& query, const std::vector<HashCode>& database);

/// Per-component sign comparison over unpacked codes.
std::size_t naive_hamming(const std::vector<int>& a, const std::vector<int>& b);

/// f_b(x) for every query and bit, straight from the kernel expansion.
DecisionMatrix decision_matrix(const Model& model, const Matrix& standardized_queries);

}  // namespace sshl::reference
