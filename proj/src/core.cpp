#include "sshl/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

namespace sshl {

namespace {
constexpr std::size_t kWordBits = 64;

std::size_t word_count(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }
}  // namespace

HashCode::HashCode(std::size_t bits) : bits_(bits), words_(word_count(bits), 0) {}

HashCode HashCode::from_signs(std::span<const int> signs) {
  HashCode code(signs.size());
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (signs[i] != 1 && signs[i] != -1) {
      throw DimensionError("hash code component must be -1 or +1, got " + std::to_string(signs[i]));
    }
    code.set(i, signs[i]);
  }
  return code;
}

HashCode HashCode::from_values(std::span<const double> values) {
  HashCode code(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) code.set(i, sgn(values[i]));
  return code;
}

int HashCode::operator[](std::size_t i) const {
  return ((words_[i / kWordBits] >> (i % kWordBits)) & 1u) ? 1 : -1;
}

void HashCode::set(std::size_t i, int sign) {
  const std::uint64_t mask = std::uint64_t{1} << (i % kWordBits);
  if (sign > 0) {
    words_[i / kWordBits] |= mask;
  } else {
    words_[i / kWordBits] &= ~mask;
  }
}

HashCode HashCode::negated() const {
  HashCode out(bits_);
  for (std::size_t w = 0; w < words_.size(); ++w) out.words_[w] = ~words_[w];
  // keep padding bits clear so equality stays well defined
  if (bits_ % kWordBits != 0) out.words_.back() &= (std::uint64_t{1} << (bits_ % kWordBits)) - 1;
  return out;
}

std::vector<int> HashCode::signs() const {
  std::vector<int> out(bits_);
  for (std::size_t i = 0; i < bits_; ++i) out[i] = (*this)[i];
  return out;
}

std::string HashCode::to_string() const {
  std::string s(bits_, '0');
  for (std::size_t i = 0; i < bits_; ++i) {
    if ((*this)[i] > 0) s[i] = '1';
  }
  return s;
}

HashCode HashCode::from_string(const std::string& s) {
  HashCode code(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') {
      code.set(i, 1);
    } else if (s[i] != '0') {
      throw ParseError("hash code string may only contain '0' and '1'");
    }
  }
  return code;
}

std::size_t hamming_distance(const HashCode& a, const HashCode& b) {
  if (a.size() != b.size()) {
    throw DimensionError("hamming_distance: code lengths differ (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
  }
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t d = 0;
  for (std::size_t w = 0; w < wa.size(); ++w) d += static_cast<std::size_t>(std::popcount(wa[w] ^ wb[w]));
  return d;
}

double soft_distance(std::span<const double> f, const HashCode& mu) {
  if (f.size() != mu.size()) {
    throw DimensionError("soft_distance: decision vector has " + std::to_string(f.size()) +
                         " entries but codeword has " + std::to_string(mu.size()) + " bits");
  }
  double total = 0.0;
  for (std::size_t b = 0; b < f.size(); ++b) total += std::max(0.0, 1.0 - mu[b] * f[b]);
  return total;
}

std::size_t Codebook::nearest(const HashCode& code) const {
  std::size_t best = 0;
  std::size_t best_d = std::numeric_limits<std::size_t>::max();
  for (std::size_t g = 0; g < codewords.size(); ++g) {
    const std::size_t d = hamming_distance(code, codewords[g]);
    if (d < best_d) {
      best_d = d;
      best = g;
    }
  }
  return best;
}

void Codebook::validate(std::size_t bits) const {
  for (const auto& c : codewords) {
    if (c.size() != bits) throw DimensionError("codeword length does not match the number of bits");
  }
}

std::vector<std::size_t> Dataset::labeled_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < labels.size(); ++n) {
    if (labels[n]) out.push_back(n);
  }
  return out;
}

std::vector<std::size_t> Dataset::unlabeled_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < labels.size(); ++n) {
    if (!labels[n]) out.push_back(n);
  }
  return out;
}

bool Dataset::fully_labeled() const {
  return std::all_of(labels.begin(), labels.end(), [](const auto& l) { return l.has_value(); });
}

void Dataset::validate() const {
  if (labels.size() != size()) {
    throw DimensionError("dataset has " + std::to_string(size()) + " rows but " + std::to_string(labels.size()) +
                         " label slots");
  }
  for (std::size_t n = 0; n < labels.size(); ++n) {
    if (labels[n] && (*labels[n] < 0 || *labels[n] >= groups)) {
      throw ConfigError("sample " + std::to_string(n) + " has group " + std::to_string(*labels[n]) +
                        " outside [0, " + std::to_string(groups) + ")");
    }
  }
  if (!label_values.empty() && label_values.size() != static_cast<std::size_t>(groups)) {
    throw ConfigError("label map size does not match the number of groups");
  }
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.groups = groups;
  out.label_values = label_values;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  out.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) = features.row(static_cast<Eigen::Index>(rows[i]));
    out.labels.push_back(labels[rows[i]]);
  }
  return out;
}

Matrix Assignment::gamma() const {
  Matrix g = Matrix::Zero(static_cast<Eigen::Index>(group.size()), groups);
  for (std::size_t n = 0; n < group.size(); ++n) g(static_cast<Eigen::Index>(n), group[n]) = 1.0;
  return g;
}

Matrix Standardization::apply(const Matrix& x) const {
  if (x.cols() != mean.size()) {
    throw DimensionError("feature dimension " + std::to_string(x.cols()) + " does not match model dimension " +
                         std::to_string(mean.size()));
  }
  Matrix out = x.rowwise() - mean.transpose();
  out.array().rowwise() /= scale.transpose().array();
  return out;
}

Standardization Standardization::identity(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return {Vector::Zero(d), Vector::Ones(d)};
}

Standardization Standardization::fit(const Matrix& x) {
  if (x.rows() == 0) throw ConfigError("cannot fit standardization on an empty sample");
  Standardization out;
  out.mean = x.colwise().mean().transpose();
  out.scale.resize(x.cols());
  for (Eigen::Index d = 0; d < x.cols(); ++d) {
    const double var = (x.col(d).array() - out.mean[d]).square().mean();
    const double sd = std::max(std::sqrt(var), 1e-12);
    if (sd > 1e-12) {
      out.scale[d] = sd;
    } else {
      // constant columns pass through untouched
      out.mean[d] = 0.0;
      out.scale[d] = 1.0;
    }
  }
  return out;
}

void TrainConfig::validate() const {
  if (bits < 1) throw ConfigError("bits must be >= 1");
  if (!(c > 0.0)) throw ConfigError("C must be > 0");
  if (!(p > 1.0)) throw ConfigError("p must be > 1");
  if (!(jitter >= 0.0)) throw ConfigError("jitter must be >= 0");
  if (max_outer_iterations < 1) throw ConfigError("max_outer_iterations must be >= 1");
  if (!(tolerance >= 0.0)) throw ConfigError("tolerance must be >= 0");
  if (!(svm_kkt_tolerance > 0.0)) throw ConfigError("svm KKT tolerance must be > 0");
}

void Model::validate() const {
  const auto n = static_cast<Eigen::Index>(num_train());
  const auto m = static_cast<Eigen::Index>(num_kernels());
  for (const auto& bit : bits) {
    if (bit.eta.size() != n) throw DimensionError("dual coefficient vector length differs from training size");
    if (bit.theta.size() != m) throw DimensionError("MKL weight vector length differs from kernel count");
    if ((bit.theta.array() < 0.0).any()) throw ConfigError("MKL weights must be nonnegative");
    if (bit.theta.array().pow(p).sum() > std::pow(1.0 + 1e-12, p)) throw ConfigError("MKL weights outside the lp ball");
  }
  codebook.validate(num_bits());
}

std::vector<HashCode> signs_of(const DecisionMatrix& f) {
  std::vector<HashCode> out;
  out.reserve(static_cast<std::size_t>(f.rows()));
  for (Eigen::Index n = 0; n < f.rows(); ++n) {
    out.push_back(HashCode::from_values({f.row(n).data(), static_cast<std::size_t>(f.cols())}));
  }
  return out;
}

double distortion(const DecisionMatrix& f, const Codebook& codebook, const Dataset& data) {
  if (static_cast<std::size_t>(f.rows()) != data.size()) throw DimensionError("distortion: row count mismatch");
  if (static_cast<int>(codebook.groups()) != data.groups) {
    throw ConfigError("distortion: model has " + std::to_string(codebook.groups()) + " groups, dataset declares " +
                      std::to_string(data.groups));
  }
  double total = 0.0;
  const auto codes = signs_of(f);
  for (std::size_t n = 0; n < codes.size(); ++n) {
    if (data.labels[n]) {
      total += static_cast<double>(hamming_distance(codes[n], codebook.codewords[static_cast<std::size_t>(*data.labels[n])]));
    } else {
      total += static_cast<double>(hamming_distance(codes[n], codebook.codewords[codebook.nearest(codes[n])]));
    }
  }
  return total;
}

double surrogate_loss(const DecisionMatrix& f, const Codebook& codebook, const Assignment& assignment) {
  if (static_cast<std::size_t>(f.rows()) != assignment.group.size()) {
    throw DimensionError("surrogate_loss: assignment has a different number of rows than the decision values");
  }
  if (static_cast<std::size_t>(f.cols()) != codebook.bits()) {
    throw DimensionError("surrogate_loss: decision values and codewords differ in bit count");
  }
  double total = 0.0;
  for (Eigen::Index n = 0; n < f.rows(); ++n) {
    const auto g = static_cast<std::size_t>(assignment.group[static_cast<std::size_t>(n)]);
    total += soft_distance({f.row(n).data(), static_cast<std::size_t>(f.cols())}, codebook.codewords.at(g));
  }
  return total;
}

}  // namespace sshl
