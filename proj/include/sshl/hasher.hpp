#pragma once

#include "sshl/core.hpp"

#include <vector>

namespace sshl {

/// Decision values of raw query rows for every bit. Query-vs-training kernel
/// blocks are computed once per kernel and shared by all bits.
DecisionMatrix decision_matrix(const Model& model, const Matrix& queries);

/// h(x) = sgn f(x), sgn(0) = +1.
std::vector<HashCode> hash(const Model& model, const Matrix& queries);

/// Group index of the nearest codeword, lowest index on ties.
std::vector<int> classify(const Codebook& codebook, const std::vector<HashCode>& codes);
std::vector<int> classify(const Model& model, const Matrix& queries);

/// Original label value of a group index.
long label_value(const Model& model, int group);

double distortion(const Model& model, const Dataset& data);
double surrogate_loss(const Model& model, const Dataset& data, const Assignment& assignment);

}  // namespace sshl
