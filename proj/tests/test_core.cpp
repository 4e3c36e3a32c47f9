#include "doctest.h"
#include "oracles.hpp"
#include "synthetic.hpp"

#include "sshl/core.hpp"
#include "sshl/reference.hpp"

#include <random>
#include <vector>

using namespace sshl;

namespace {

HashCode code(std::vector<int> s) { return HashCode::from_signs(s); }

}  // namespace

TEST_CASE("hamming distance examples") {
  CHECK(hamming_distance(code({1, 1, -1}), code({1, 1, -1})) == 0);
  CHECK(hamming_distance(code({1, 1}), code({1, -1})) == 1);
  const auto a = HashCode::from_signs(testing::random_signs(1, 16, 3)[0]);
  CHECK(hamming_distance(a, a.negated()) == 16);
  CHECK_THROWS_AS(hamming_distance(code({1}), code({1, 1})), DimensionError);
}

TEST_CASE("packed hamming distance agrees with a per-component count") {
  const auto a = testing::random_signs(1000, 130, 11);
  const auto b = testing::random_signs(1000, 130, 12);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto d = hamming_distance(HashCode::from_signs(a[i]), HashCode::from_signs(b[i]));
    REQUIRE(d == reference::naive_hamming(a[i], b[i]));
    REQUIRE(d == hamming_distance(HashCode::from_signs(b[i]), HashCode::from_signs(a[i])));
  }
}

TEST_CASE("hash code round trips") {
  const auto signs = testing::random_signs(20, 77, 5);
  for (const auto& s : signs) {
    const auto c = HashCode::from_signs(s);
    CHECK(c.signs() == s);
    CHECK(HashCode::from_string(c.to_string()) == c);
  }
  CHECK(code({1, -1, 1}).to_string() == "101");
  CHECK_THROWS_AS(code({1, 0}), DimensionError);
  CHECK_THROWS_AS(HashCode::from_string("10x"), ParseError);
}

TEST_CASE("sign convention") {
  CHECK(sgn(0.0) == 1);
  CHECK(sgn(-0.0) == 1);
  CHECK(sgn(-1e-300) == -1);
  const std::vector<double> f{0.3, -0.2, 5.0};
  CHECK(HashCode::from_values(f) == code({1, -1, 1}));
  const std::vector<double> z{0.0, -0.0};
  CHECK(HashCode::from_values(z) == code({1, 1}));
}

TEST_CASE("soft distance examples") {
  const std::vector<double> a{2.0, 2.0};
  CHECK(soft_distance(a, code({1, 1})) == 0.0);
  const std::vector<double> zero{0.0, 0.0};
  for (const auto& mu : {code({1, 1}), code({1, -1}), code({-1, 1}), code({-1, -1})}) {
    CHECK(soft_distance(zero, mu) == 2.0);
  }
  const std::vector<double> b{0.5, -2.0};
  CHECK(soft_distance(b, code({1, 1})) == doctest::Approx(3.5));
  CHECK_THROWS_AS(soft_distance(b, code({1})), DimensionError);
}

TEST_CASE("soft distance bounds hamming distance and is convex") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 1.5);
  std::uniform_real_distribution<double> t(0.0, 1.0);
  const auto mus = testing::random_signs(500, 9, 8);
  for (const auto& m : mus) {
    const auto mu = HashCode::from_signs(m);
    std::vector<double> f(9), h(9), mid(9);
    for (auto& v : f) v = g(rng);
    for (auto& v : h) v = g(rng);
    CHECK(static_cast<double>(hamming_distance(HashCode::from_values(f), mu)) <= soft_distance(f, mu));
    const double lambda = t(rng);
    for (std::size_t i = 0; i < 9; ++i) mid[i] = lambda * f[i] + (1.0 - lambda) * h[i];
    CHECK(soft_distance(mid, mu) <= lambda * soft_distance(f, mu) + (1.0 - lambda) * soft_distance(h, mu) + 1e-12);
  }
}

TEST_CASE("distortion and surrogate examples") {
  Codebook cb{{code({1, 1, 1, 1}), code({-1, -1, -1, -1})}};
  Dataset d;
  d.features = Matrix::Zero(1, 1);
  d.groups = 2;
  d.labels = {0};

  DecisionMatrix f(1, 4);
  f << 1.0, 2.0, 3.0, 4.0;
  CHECK(distortion(f, cb, d) == 0.0);
  Assignment a{{0}, 2};
  CHECK(surrogate_loss(f, cb, a) == 0.0);

  f << 1.0, -2.0, -3.0, -4.0;
  CHECK(distortion(f, cb, d) == 3.0);

  // unlabeled: nearest codeword at distances {2, 5}
  Codebook cb2{{code({1, 1, 1, 1, 1}), code({-1, -1, -1, -1, -1})}};
  DecisionMatrix f2(1, 5);
  f2 << 1.0, 1.0, 1.0, -1.0, -1.0;
  d.labels = {std::nullopt};
  CHECK(distortion(f2, cb2, d) == 2.0);

  DecisionMatrix one(1, 1);
  one << 0.0;
  CHECK(surrogate_loss(one, Codebook{{code({1}), code({-1})}}, Assignment{{1}, 2}) == 1.0);

  // two samples, two bits: hinge terms 0.5 + 0 + 1.25 + 3 = 4.75
  DecisionMatrix f3(2, 2);
  f3 << 0.5, 1.5, 0.25, 2.0;
  Codebook cb3{{code({1, 1}), code({-1, -1})}};
  CHECK(surrogate_loss(f3, cb3, Assignment{{0, 1}, 2}) == doctest::Approx(0.5 + 0.0 + 1.25 + 3.0));
}

TEST_CASE("distortion never exceeds the surrogate under the nearest assignment") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 12, bits = 6;
    DecisionMatrix f(n, bits);
    for (Eigen::Index i = 0; i < f.size(); ++i) f.data()[i] = g(rng);
    Codebook cb;
    for (const auto& s : testing::random_signs(3, bits, 100 + static_cast<std::uint64_t>(trial))) {
      cb.codewords.push_back(HashCode::from_signs(s));
    }
    Dataset d;
    d.features = Matrix::Zero(n, 1);
    d.groups = 3;
    Assignment a{std::vector<int>(n), 3};
    for (std::size_t i = 0; i < n; ++i) {
      if (i % 2 == 0) {
        d.labels.emplace_back(static_cast<int>(i % 3));
        a.group[i] = static_cast<int>(i % 3);
      } else {
        d.labels.emplace_back(std::nullopt);
        // soft-distance nearest codeword, computed directly
        double best = 1e300;
        for (int gi = 0; gi < 3; ++gi) {
          const double v = soft_distance({f.row(static_cast<Eigen::Index>(i)).data(), bits}, cb.codewords[static_cast<std::size_t>(gi)]);
          if (v < best) {
            best = v;
            a.group[i] = gi;
          }
        }
      }
    }
    CHECK(distortion(f, cb, d) <= surrogate_loss(f, cb, a) + 1e-12);
  }
}

TEST_CASE("codebook nearest breaks ties toward the lowest index") {
  Codebook cb{{code({1, 1}), code({-1, -1}), code({1, -1})}};
  CHECK(cb.nearest(code({-1, -1})) == 1);
  CHECK(cb.nearest(code({-1, 1})) == 0);
}

TEST_CASE("dataset invariants") {
  Dataset d = testing::with_labels(Matrix::Zero(3, 2), {0, 1, 0}, 2);
  d.labels[1] = std::nullopt;
  CHECK(d.labeled_indices() == std::vector<std::size_t>{0, 2});
  CHECK(d.unlabeled_indices() == std::vector<std::size_t>{1});
  CHECK_FALSE(d.fully_labeled());
  d.validate();
  d.labels[0] = 5;
  CHECK_THROWS_AS(d.validate(), ConfigError);
  d.labels.pop_back();
  CHECK_THROWS_AS(d.validate(), DimensionError);
}

TEST_CASE("assignment gamma is one-hot") {
  Assignment a{{2, 0, 1}, 3};
  const Matrix g = a.gamma();
  CHECK(g.rowwise().sum().isApprox(Vector::Ones(3)));
  CHECK(g(0, 2) == 1.0);
  CHECK(g(1, 0) == 1.0);
}

TEST_CASE("train config validation") {
  TrainConfig c;
  c.validate();
  c.p = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.c = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.bits = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.jitter = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}
