#include "doctest.h"
#include "synthetic.hpp"

#include "sshl/kernels.hpp"
#include "sshl/reference.hpp"

#include <cmath>
#include <vector>

using namespace sshl;

namespace {

double k(const KernelDescriptor& d, std::vector<double> x, std::vector<double> y) { return kernel_value(d, x, y); }

}  // namespace

TEST_CASE("kernel value examples") {
  for (double sigma : {0.1, 1.0, 7.0}) CHECK(k(Gaussian{sigma}, {0.3, -2.0}, {0.3, -2.0}) == 1.0);
  CHECK(k(NormalizedLinear{}, {1.0, 0.0}, {0.0, 1.0}) == 0.0);
  CHECK(k(Gaussian{1.0}, {0.0, 0.0}, {1.0, 0.0}) == doctest::Approx(0.6065306597126334).epsilon(1e-14));
  CHECK(k(GaussianGamma{1.0}, {0.0, 0.0}, {1.0, 0.0}) == doctest::Approx(std::exp(-1.0)));
  // (x.y + 1)^2 / sqrt((x.x + 1)^2 (y.y + 1)^2) with x.y = 1, x.x = 1, y.y = 2
  CHECK(k(NormalizedPolynomial{2, 1.0}, {1.0, 0.0}, {1.0, 1.0}) == doctest::Approx(4.0 / std::sqrt(4.0 * 9.0)));
}

TEST_CASE("normalized kernels on zero vectors") {
  CHECK(k(NormalizedLinear{}, {0.0, 0.0}, {1.0, 2.0}) == 0.0);
  CHECK(k(NormalizedLinear{}, {0.0, 0.0}, {0.0, 0.0}) == 1.0);
  CHECK(k(NormalizedPolynomial{3, 0.0}, {0.0, 0.0}, {1.0, 2.0}) == 0.0);
  Matrix x(2, 2);
  x << 0.0, 0.0, 1.0, 1.0;
  const Matrix g = gram_matrix(NormalizedLinear{}, x);
  CHECK(g(0, 0) == 1.0);
  CHECK(g(0, 1) == 0.0);
}

TEST_CASE("kernel descriptor validation") {
  CHECK_THROWS_AS(validate(Gaussian{0.0}), ConfigError);
  CHECK_THROWS_AS(validate(GaussianGamma{-1.0}), ConfigError);
  CHECK_THROWS_AS(validate(NormalizedPolynomial{0, 1.0}), ConfigError);
  CHECK_THROWS_AS(validate(NormalizedPolynomial{2, -1.0}), ConfigError);
}

TEST_CASE("gram matrices: symmetry, unit diagonal, boundedness, PSD") {
  const Matrix x = testing::random_matrix(20, 5, 4) * 2.0;
  for (const auto& d : default_kernel_bank()) {
    const Matrix g = gram_matrix(d, x);
    CHECK((g - g.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((g.diagonal().array() - 1.0).abs().maxCoeff() <= 1e-10);
    CHECK(g.cwiseAbs().maxCoeff() <= 1.0 + 1e-10);
    Eigen::SelfAdjointEigenSolver<Matrix> es(g);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8);
  }
}

TEST_CASE("combined kernels stay PSD") {
  const auto bank = KernelBank::build(default_kernel_bank(), testing::random_matrix(20, 4, 9));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Vector theta = (testing::random_matrix(static_cast<Eigen::Index>(bank.size()), 1, seed).array().abs()).matrix();
    Eigen::SelfAdjointEigenSolver<Matrix> es(combine(theta, bank, 1e-8));
    CHECK(es.eigenvalues().minCoeff() >= -1e-8);
  }
}

TEST_CASE("combine examples") {
  KernelBank bank;
  bank.descriptors = {NormalizedLinear{}, Gaussian{1.0}};
  bank.grams = {Matrix::Identity(2, 2), Matrix::Ones(2, 2)};
  const double j = 1e-8;
  Vector e1(2);
  e1 << 1.0, 0.0;
  CHECK(combine(e1, bank, j).isApprox(bank.grams[0] + j * Matrix::Identity(2, 2)));
  CHECK(combine(Vector::Zero(2), bank, j) == j * Matrix::Identity(2, 2));
  Vector theta(2);
  theta << 0.6, 0.8;
  Matrix expected(2, 2);
  expected << 1.4 + j, 0.8, 0.8, 1.4 + j;
  CHECK((combine(theta, bank, j) - expected).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK_THROWS_AS(combine(Vector::Ones(3), bank, j), DimensionError);
}

TEST_CASE("parallel gram matches the serial reference") {
  const Matrix x = testing::random_matrix(37, 6, 1);
  const Matrix y = testing::random_matrix(23, 6, 2);
  for (const auto& d : default_kernel_bank()) {
    CHECK((gram_matrix(d, x, y) - reference::gram_matrix(d, x, y)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((gram_matrix(d, x) - reference::gram_matrix(d, x, x)).cwiseAbs().maxCoeff() <= 1e-12);
  }
  CHECK_THROWS_AS(gram_matrix(Gaussian{1.0}, x, testing::random_matrix(3, 2, 1)), DimensionError);
}

TEST_CASE("default bank and kernel lists") {
  const auto bank = default_kernel_bank();
  REQUIRE(bank.size() == 11);
  CHECK(bank[0] == KernelDescriptor{NormalizedLinear{}});
  CHECK(bank[1] == KernelDescriptor{NormalizedPolynomial{2, 1.0}});
  CHECK(bank[2] == KernelDescriptor{Gaussian{1.0 / 128.0}});
  CHECK(bank[10] == KernelDescriptor{Gaussian{128.0}});

  CHECK(parse_kernel_list("default") == bank);
  const auto list = parse_kernel_list("linear,poly:3:0.5,gauss:2,gauss-gamma:0.25");
  REQUIRE(list.size() == 4);
  CHECK(list[1] == KernelDescriptor{NormalizedPolynomial{3, 0.5}});
  CHECK(list[3] == KernelDescriptor{GaussianGamma{0.25}});
  for (const auto& d : list) CHECK(parse_kernel_list(to_string(d)).front() == d);
  CHECK_THROWS_AS(parse_kernel_list("rbf:1"), ConfigError);
  CHECK_THROWS_AS(parse_kernel_list("gauss:-1"), ConfigError);
  CHECK_THROWS_AS(parse_kernel_list("poly:2.5:1"), ConfigError);
  CHECK_THROWS_AS(parse_kernel_list(""), ConfigError);
}
