#include <doctest.h>

#include <cmath>
#include <vector>

#include "quadrature.hpp"
#include "rng.hpp"
#include "series.hpp"

namespace {

const double PI = std::acos(-1.0);

// Quadrature oracle for the exact-orthogonality inner product.
double quad_inner(const sgs::cosine_series& a, const sgs::cosine_series& b,
                  const sgs::quad_rule& rule) {
  double s = 0.0;
  for (std::size_t j = 0; j < rule.count(); ++j)
    s += rule.weights[j] * a.evaluate(rule.point(j)) * b.evaluate(rule.point(j));
  return s;
}

sgs::cosine_series random_series(int dim, int kmax, std::uint64_t seed) {
  sgs::counter_rng r(seed, sgs::stream::optimizer);
  sgs::cosine_series s(dim);
  std::vector<int> k(dim);
  for (int trial = 0; trial < 6; ++trial) {
    for (int i = 0; i < dim; ++i)
      k[i] = static_cast<int>(r.uniform() * (kmax + 1));
    s.set(k, r.uniform(-1.0, 1.0));
  }
  return s;
}

TEST_SUITE("series") {

TEST_CASE("evaluate: constants, single modes, tensor modes") {
  sgs::cosine_series one = sgs::cosine_series::constant(1, 1.0);
  CHECK(one.evaluate(std::vector<double>{0.37}) == doctest::Approx(1.0).epsilon(1e-15));

  sgs::cosine_series c1(1);
  c1.set({1}, 1.0); // cos(pi x)
  CHECK(c1.evaluate(std::vector<double>{0.0}) == doctest::Approx(1.0));
  CHECK(c1.evaluate(std::vector<double>{1.0}) == doctest::Approx(-1.0));

  sgs::cosine_series c21(2);
  c21.set({2, 1}, 0.5); // cos(2 pi x1) cos(pi x2), zero at x2 = 1/2
  CHECK(c21.evaluate(std::vector<double>{0.25, 0.5}) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("gradient: closed forms") {
  sgs::cosine_series k = sgs::cosine_series::constant(2, 3.0);
  auto g = k.gradient(std::vector<double>{0.3, 0.4});
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 0.0);

  sgs::cosine_series c1(1);
  c1.set({1}, 1.0);
  auto g1 = c1.gradient(std::vector<double>{0.5});
  CHECK(g1[0] == doctest::Approx(-PI).epsilon(1e-14));

  sgs::cosine_series c11(2);
  c11.set({1, 1}, 1.0);
  auto g11 = c11.gradient(std::vector<double>{0.5, 0.0});
  CHECK(g11[0] == doctest::Approx(-PI).epsilon(1e-14));
  CHECK(g11[1] == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("inner products are exact under orthogonality") {
  sgs::cosine_series one = sgs::cosine_series::constant(1, 1.0);
  CHECK(sgs::inner_product(one, one) == 1.0);

  sgs::cosine_series c1(1), c2(1);
  c1.set({1}, 1.0);
  c2.set({2}, 1.0);
  CHECK(sgs::inner_product(c1, c1) == 0.5);
  CHECK(sgs::inner_product(c1, c2) == 0.0);
  // <grad cos(pi x), grad cos(pi x)> = pi^2 / 2
  CHECK(sgs::grad_inner_product(c1, c1) == doctest::Approx(PI * PI / 2).epsilon(1e-15));
  CHECK(sgs::grad_inner_product(one, c1) == 0.0);
}

TEST_CASE("inner product matches tensor-Gauss quadrature") {
  for (int dim : {1, 2, 3}) {
    sgs::quad_rule rule = sgs::tensor_gauss(dim, 24);
    sgs::cosine_series a = random_series(dim, 4, 11 + dim);
    sgs::cosine_series b = random_series(dim, 4, 57 + dim);
    const double exact = sgs::inner_product(a, b);
    const double quad = quad_inner(a, b, rule);
    CHECK(quad == doctest::Approx(exact).epsilon(1e-10));
  }
}

TEST_CASE("multiply: product-to-sum identities") {
  sgs::cosine_series c1(1);
  c1.set({1}, 1.0);
  // cos^2(pi x) = 1/2 + cos(2 pi x)/2
  sgs::cosine_series sq = sgs::multiply(c1, c1);
  CHECK(sq.get({0}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sq.get({2}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sq.size() == 2);

  // multiplying by the constant 1 is the identity
  sgs::cosine_series one = sgs::cosine_series::constant(1, 1.0);
  sgs::cosine_series s = random_series(1, 5, 3);
  sgs::cosine_series p = sgs::multiply(one, s);
  for (const auto& [k, v] : s.coeffs())
    CHECK(p.get(k) == doctest::Approx(v).epsilon(1e-15));
  CHECK(p.size() == s.size());

  // cos(pi x) cos(2 pi x) = cos(pi x)/2 + cos(3 pi x)/2
  sgs::cosine_series c2(1);
  c2.set({2}, 1.0);
  sgs::cosine_series cr = sgs::multiply(c1, c2);
  CHECK(cr.get({1}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(cr.get({3}) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("multiply agrees with pointwise products at random points") {
  for (int dim : {1, 2}) {
    sgs::cosine_series a = random_series(dim, 3, 101 + dim);
    sgs::cosine_series b = random_series(dim, 3, 202 + dim);
    sgs::cosine_series p = sgs::multiply(a, b);
    sgs::counter_rng r(9, sgs::stream::sampling);
    std::vector<double> x(dim);
    for (int i = 0; i < 100; ++i) {
      for (int j = 0; j < dim; ++j) x[j] = r.uniform();
      const double direct = a.evaluate(x) * b.evaluate(x);
      CHECK(p.evaluate(x) == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("barron norm: closed forms") {
  sgs::cosine_series k = sgs::cosine_series::constant(3, -1.0);
  CHECK(sgs::barron_norm(k, 0.0) == 1.0);
  CHECK(sgs::barron_norm(k, 2.0) == 1.0);
  CHECK(sgs::barron_norm(k, 7.5) == 1.0);

  sgs::cosine_series c1(1);
  c1.set({1}, 1.0);
  CHECK(sgs::barron_norm(c1, 2.0) == doctest::Approx(1.0 + PI * PI).epsilon(1e-15));

  sgs::cosine_series c11(2);
  c11.set({1, 1}, 2.0); // |k|_1 = 2: 2 (1 + 2 pi)
  CHECK(sgs::barron_norm(c11, 1.0) ==
        doctest::Approx(2.0 * (1.0 + 2.0 * PI)).epsilon(1e-15));
}

TEST_CASE("barron norm is monotone in order and subadditive") {
  sgs::cosine_series a = random_series(2, 4, 31);
  sgs::cosine_series b = random_series(2, 4, 32);
  double prev = 0.0;
  for (double s : {0.0, 1.0, 2.0, 3.0}) {
    const double cur = sgs::barron_norm(a, s);
    CHECK(cur >= prev);
    prev = cur;
  }
  for (double s : {0.0, 2.0}) {
    const double lhs = sgs::barron_norm(sgs::lin(a, 1.0, b, 1.0), s);
    CHECK(lhs <= sgs::barron_norm(a, s) + sgs::barron_norm(b, s) + 1e-12);
  }
}

TEST_CASE("sup norm is bounded by the order-0 norm") {
  sgs::cosine_series a = random_series(2, 5, 77);
  const double bound = sgs::barron_norm(a, 0.0);
  sgs::counter_rng r(3, sgs::stream::sampling);
  std::vector<double> x(2);
  for (int i = 0; i < 1000; ++i) {
    x[0] = r.uniform();
    x[1] = r.uniform();
    CHECK(std::abs(a.evaluate(x)) <= bound + 1e-12);
  }
}

TEST_CASE("set/get semantics and max frequency") {
  sgs::cosine_series s(2);
  CHECK(s.size() == 0);
  CHECK(s.max_frequency() == 0);
  s.set({3, 1}, 2.5);
  CHECK(s.get({3, 1}) == 2.5);
  CHECK(s.get({1, 3}) == 0.0);
  CHECK(s.max_frequency() == 3);
  s.set({3, 1}, 0.0); // exact zero erases
  CHECK(s.size() == 0);
  CHECK(sgs::lin(s, 2.0, s, -2.0).size() == 0);
}

} // TEST_SUITE

} // namespace
