#pragma once

// Shared domain types: datasets, packed hash codes, codebooks, assignments,
// model parameters, plus the Hamming / hinge distance primitives.

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace sshl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
/// Decision values, one row per sample and one column per bit.
using DecisionMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class DimensionError : public Error {
 public:
  using Error::Error;
};
class ConfigError : public Error {
 public:
  using Error::Error;
};
class ParseError : public Error {
 public:
  using Error::Error;
};
class NumericalError : public Error {
 public:
  using Error::Error;
};
class DegenerateProblemError : public Error {
 public:
  using Error::Error;
};

/// Sign with the convention sgn(0) = +1 (negative zero included).
inline int sgn(double v) { return v >= 0.0 ? 1 : -1; }

/// B-bit code over {-1,+1}, packed 64 bits per word: bit i of word i/64 is set
/// iff component i is +1.
class HashCode {
 public:
  HashCode() = default;
  /// All components -1.
  explicit HashCode(std::size_t bits);

  static HashCode from_signs(std::span<const int> signs);
  static HashCode from_values(std::span<const double> values);

  std::size_t size() const { return bits_; }
  int operator[](std::size_t i) const;
  void set(std::size_t i, int sign);
  HashCode negated() const;

  std::vector<int> signs() const;
  std::span<const std::uint64_t> words() const { return words_; }
  /// '1' for +1, '0' for -1.
  std::string to_string() const;
  static HashCode from_string(const std::string& s);

  friend bool operator==(const HashCode&, const HashCode&) = default;

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

std::size_t hamming_distance(const HashCode& a, const HashCode& b);

/// Sum over bits of max(0, 1 - mu_b f_b).
double soft_distance(std::span<const double> f, const HashCode& mu);

struct Codebook {
  std::vector<HashCode> codewords;

  std::size_t groups() const { return codewords.size(); }
  std::size_t bits() const { return codewords.empty() ? 0 : codewords.front().size(); }
  /// Index of the nearest codeword in Hamming distance, lowest index on ties.
  std::size_t nearest(const HashCode& code) const;
  void validate(std::size_t bits) const;
};

/// Training or query samples. Group ids are 0-based internally; label_values
/// maps them back to the labels found in the input file.
struct Dataset {
  Matrix features;                        // N x D
  std::vector<std::optional<int>> labels; // group index, empty if unlabeled
  int groups = 0;
  std::vector<long> label_values;         // size groups

  std::size_t size() const { return static_cast<std::size_t>(features.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(features.cols()); }
  std::vector<std::size_t> labeled_indices() const;
  std::vector<std::size_t> unlabeled_indices() const;
  bool fully_labeled() const;
  /// Throws ConfigError / DimensionError when the invariants do not hold.
  void validate() const;
  Dataset subset(std::span<const std::size_t> rows) const;
};

/// One-hot sample-to-group weights, stored as the index of the hot column.
struct Assignment {
  std::vector<int> group;
  int groups = 0;

  Matrix gamma() const;
};

struct NormalizedLinear {
  friend bool operator==(const NormalizedLinear&, const NormalizedLinear&) = default;
};
struct NormalizedPolynomial {
  int degree = 2;
  double bias = 1.0;
  friend bool operator==(const NormalizedPolynomial&, const NormalizedPolynomial&) = default;
};
/// exp(-|x - x'|^2 / (2 sigma^2)).
struct Gaussian {
  double sigma = 1.0;
  friend bool operator==(const Gaussian&, const Gaussian&) = default;
};
/// exp(-gamma |x - x'|^2); the alternative reading of a bandwidth parameter.
struct GaussianGamma {
  double gamma = 1.0;
  friend bool operator==(const GaussianGamma&, const GaussianGamma&) = default;
};
using KernelDescriptor = std::variant<NormalizedLinear, NormalizedPolynomial, Gaussian, GaussianGamma>;

/// Per-dimension affine map (x - mean) / scale.
struct Standardization {
  Vector mean;
  Vector scale;

  Matrix apply(const Matrix& x) const;
  static Standardization identity(std::size_t dim);
  /// Population mean and std per column. Columns with std below 1e-12 get
  /// mean 0 and scale 1, so they pass through unchanged.
  static Standardization fit(const Matrix& x);
};

enum class TrainMode { supervised, semi_supervised, transductive };

struct TrainConfig {
  int bits = 16;
  double c = 1000.0;
  double p = 2.0;
  std::vector<KernelDescriptor> kernels;  // empty selects the default bank
  int max_outer_iterations = 50;
  double tolerance = 1e-4;                // relative decrease of the surrogate
  std::uint64_t seed = 1;
  TrainMode mode = TrainMode::supervised;
  double jitter = 1e-8;
  double svm_kkt_tolerance = 1e-3;
  bool standardize = true;
  // Keep a bit's previous function when its new SVM solution would raise the
  // bit's hinge sum; the regularized SVM objective alone does not guarantee it.
  bool descent_guard = true;

  void validate() const;
};

/// f_b(x) = sum_m theta_m sum_n eta_n k_m(x_n, x) + beta.
struct BitFunction {
  Vector eta;
  double beta = 0.0;
  Vector theta;
};

struct Model {
  std::vector<BitFunction> bits;
  Codebook codebook;
  std::vector<KernelDescriptor> kernels;
  Matrix training_features;  // standardized, N x D
  Standardization standardization;
  std::vector<long> label_values;
  double c = 1000.0;
  double p = 2.0;

  std::size_t num_bits() const { return bits.size(); }
  std::size_t groups() const { return codebook.groups(); }
  std::size_t num_kernels() const { return kernels.size(); }
  std::size_t num_train() const { return static_cast<std::size_t>(training_features.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(training_features.cols()); }
  void validate() const;
};

std::vector<HashCode> signs_of(const DecisionMatrix& f);

/// Distortion from decision values: labeled rows use their class codeword,
/// unlabeled rows the nearest codeword.
double distortion(const DecisionMatrix& f, const Codebook& codebook, const Dataset& data);

/// Sum_n d_bar(f(x_n), mu_{group(n)}) under a one-hot assignment.
double surrogate_loss(const DecisionMatrix& f, const Codebook& codebook, const Assignment& assignment);

}  // namespace sshl
