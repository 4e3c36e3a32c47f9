#include "sshl/kernels.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace sshl {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double dot(const double* a, const double* b, Eigen::Index d) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) s += a[k] * b[k];
  return s;
}

double squared_distance(const double* a, const double* b, Eigen::Index d) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

// k(0, x) = 0 and k(0, 0) = 1 for the normalized kernels.
double normalize(double q, double qxx, double qyy) {
  if (qxx <= 0.0 || qyy <= 0.0) return (qxx <= 0.0 && qyy <= 0.0) ? 1.0 : 0.0;
  return q / std::sqrt(qxx * qyy);
}

// Self-similarity q(x, x) used to normalize; unused for Gaussians.
Vector self_similarity(const KernelDescriptor& kernel, const Matrix& xt) {
  Vector out(xt.cols());
  for (Eigen::Index i = 0; i < xt.cols(); ++i) {
    const double sq = xt.col(i).squaredNorm();
    out[i] = std::visit(Overloaded{[&](const NormalizedLinear&) { return sq; },
                                   [&](const NormalizedPolynomial& k) { return std::pow(sq + k.bias, k.degree); },
                                   [&](const auto&) { return 1.0; }},
                        kernel);
  }
  return out;
}

double pair_value(const KernelDescriptor& kernel, const double* x, const double* y, Eigen::Index d, double sx,
                  double sy) {
  return std::visit(
      Overloaded{[&](const NormalizedLinear&) { return normalize(dot(x, y, d), sx, sy); },
                 [&](const NormalizedPolynomial& k) {
                   return normalize(std::pow(dot(x, y, d) + k.bias, k.degree), sx, sy);
                 },
                 [&](const Gaussian& k) { return std::exp(-squared_distance(x, y, d) / (2.0 * k.sigma * k.sigma)); },
                 [&](const GaussianGamma& k) { return std::exp(-k.gamma * squared_distance(x, y, d)); }},
      kernel);
}

double parse_number(const std::string& token, const std::string& item) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw ConfigError("kernel spec '" + item + "': '" + token + "' is not a number");
  }
  if (used != token.size()) throw ConfigError("kernel spec '" + item + "': '" + token + "' is not a number");
  return v;
}

}  // namespace

void validate(const KernelDescriptor& kernel) {
  std::visit(Overloaded{[](const NormalizedLinear&) {},
                        [](const NormalizedPolynomial& k) {
                          if (k.degree < 1) throw ConfigError("polynomial kernel degree must be >= 1");
                          if (!(k.bias >= 0.0)) throw ConfigError("polynomial kernel bias must be >= 0");
                        },
                        [](const Gaussian& k) {
                          if (!(k.sigma > 0.0)) throw ConfigError("gaussian kernel sigma must be > 0");
                        },
                        [](const GaussianGamma& k) {
                          if (!(k.gamma > 0.0)) throw ConfigError("gaussian kernel gamma must be > 0");
                        }},
             kernel);
}

double kernel_value(const KernelDescriptor& kernel, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("kernel_value: vectors differ in dimension");
  const auto d = static_cast<Eigen::Index>(x.size());
  const Eigen::Map<const Matrix> xm(x.data(), d, 1);
  const Eigen::Map<const Matrix> ym(y.data(), d, 1);
  const Vector sx = self_similarity(kernel, xm);
  const Vector sy = self_similarity(kernel, ym);
  return pair_value(kernel, x.data(), y.data(), d, sx[0], sy[0]);
}

Matrix gram_matrix(const KernelDescriptor& kernel, const Matrix& x) {
  validate(kernel);
  // columns of the transpose are contiguous samples
  const Matrix xt = x.transpose();
  const Eigen::Index n = xt.cols();
  const Eigen::Index d = xt.rows();
  const Vector self = self_similarity(kernel, xt);
  Matrix k(n, n);
#pragma omp parallel for schedule(dynamic, 8)
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      k(i, j) = pair_value(kernel, xt.col(i).data(), xt.col(j).data(), d, self[i], self[j]);
    }
    // every supported kernel has a unit diagonal
    k(j, j) = 1.0;
  }
  k.triangularView<Eigen::StrictlyLower>() = k.transpose().triangularView<Eigen::StrictlyLower>();
  return k;
}

Matrix gram_matrix(const KernelDescriptor& kernel, const Matrix& x, const Matrix& y) {
  validate(kernel);
  if (x.cols() != y.cols()) {
    throw DimensionError("gram_matrix: feature dimensions differ (" + std::to_string(x.cols()) + " vs " +
                         std::to_string(y.cols()) + ")");
  }
  const Matrix xt = x.transpose();
  const Matrix yt = y.transpose();
  const Eigen::Index d = xt.rows();
  const Vector sx = self_similarity(kernel, xt);
  const Vector sy = self_similarity(kernel, yt);
  Matrix k(xt.cols(), yt.cols());
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < yt.cols(); ++j) {
    for (Eigen::Index i = 0; i < xt.cols(); ++i) {
      k(i, j) = pair_value(kernel, xt.col(i).data(), yt.col(j).data(), d, sx[i], sy[j]);
    }
  }
  return k;
}

std::vector<KernelDescriptor> default_kernel_bank() {
  std::vector<KernelDescriptor> bank{NormalizedLinear{}, NormalizedPolynomial{2, 1.0}};
  for (int e : {-7, -5, -3, -1, 0, 1, 3, 5, 7}) bank.emplace_back(Gaussian{std::ldexp(1.0, e)});
  return bank;
}

std::vector<KernelDescriptor> parse_kernel_list(const std::string& text) {
  std::vector<KernelDescriptor> out;
  std::stringstream list(text);
  std::string item;
  while (std::getline(list, item, ',')) {
    if (item.empty()) continue;
    std::vector<std::string> parts;
    std::stringstream fields(item);
    std::string part;
    while (std::getline(fields, part, ':')) parts.push_back(part);
    const std::string& name = parts.front();
    KernelDescriptor k;
    if (name == "default" && parts.size() == 1) {
      const auto bank = default_kernel_bank();
      out.insert(out.end(), bank.begin(), bank.end());
      continue;
    } else if (name == "linear" && parts.size() == 1) {
      k = NormalizedLinear{};
    } else if (name == "poly" && parts.size() == 3) {
      const double degree = parse_number(parts[1], item);
      if (degree != std::floor(degree)) throw ConfigError("kernel spec '" + item + "': degree must be an integer");
      k = NormalizedPolynomial{static_cast<int>(degree), parse_number(parts[2], item)};
    } else if (name == "gauss" && parts.size() == 2) {
      k = Gaussian{parse_number(parts[1], item)};
    } else if (name == "gauss-gamma" && parts.size() == 2) {
      k = GaussianGamma{parse_number(parts[1], item)};
    } else {
      throw ConfigError("unrecognized kernel spec '" + item +
                        "' (expected linear, poly:<degree>:<bias>, gauss:<sigma>, gauss-gamma:<gamma> or default)");
    }
    validate(k);
    out.push_back(k);
  }
  if (out.empty()) throw ConfigError("kernel list is empty");
  return out;
}

std::string to_string(const KernelDescriptor& kernel) {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{[&](const NormalizedLinear&) { os << "linear"; },
                        [&](const NormalizedPolynomial& k) { os << "poly:" << k.degree << ':' << k.bias; },
                        [&](const Gaussian& k) { os << "gauss:" << k.sigma; },
                        [&](const GaussianGamma& k) { os << "gauss-gamma:" << k.gamma; }},
             kernel);
  return os.str();
}

KernelBank KernelBank::build(std::vector<KernelDescriptor> descriptors, const Matrix& x) {
  KernelBank bank;
  bank.grams.reserve(descriptors.size());
  for (const auto& d : descriptors) bank.grams.push_back(gram_matrix(d, x));
  bank.descriptors = std::move(descriptors);
  return bank;
}

Matrix combine(const Vector& theta, const KernelBank& bank, double jitter) {
  if (static_cast<std::size_t>(theta.size()) != bank.size()) {
    throw DimensionError("combine: " + std::to_string(theta.size()) + " weights for " + std::to_string(bank.size()) +
                         " kernels");
  }
  if ((theta.array() < 0.0).any()) throw ConfigError("combine: kernel weights must be nonnegative");
  const Eigen::Index n = bank.samples();
  Matrix out(n, n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t m = 0; m < bank.size(); ++m) s += theta[static_cast<Eigen::Index>(m)] * bank.grams[m](i, j);
      out(i, j) = s;
    }
    out(j, j) += jitter;
  }
  return out;
}

}  // namespace sshl
