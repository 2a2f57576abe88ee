#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "errors.hpp"
#include "estimators.hpp"
#include "rng.hpp"

namespace {

const double PI = std::acos(-1.0);

sgs::cosine_series benchmark_potential() {
  sgs::cosine_series V(1);
  V.set({0}, 1.0);
  V.set({1}, 0.5);
  return V;
}

TEST_SUITE("estimators") {

TEST_CASE("sampling is reproducible and uniform") {
  sgs::sample_set a = sgs::sample(2, 3, 7);
  sgs::sample_set b = sgs::sample(2, 3, 7);
  CHECK(a.X == b.X);
  CHECK(a.X.minCoeff() >= 0.0);
  CHECK(a.X.maxCoeff() < 1.0);

  const long n = 1000000;
  sgs::sample_set big = sgs::sample(2, n, 123);
  const double sigma = 1.0 / std::sqrt(12.0 * n);
  CHECK(std::abs(big.X.col(0).mean() - 0.5) < 4 * sigma);
  CHECK(std::abs(big.X.col(1).mean() - 0.5) < 4 * sigma);

  CHECK_THROWS_AS(sgs::sample(2, 0, 1), sgs::error);
}

TEST_CASE("sample points are pure functions of (seed, index)") {
  sgs::sample_set small = sgs::sample(3, 10, 55);
  sgs::sample_set large = sgs::sample(3, 1000, 55);
  CHECK(small.X == large.X.topRows(10)); // prefix property
}

TEST_CASE("empirical losses: constants and scale invariance") {
  sgs::sample_set S = sgs::sample(1, 257, 3);
  sgs::cosine_series u = sgs::cosine_series::constant(1, 2.5);
  sgs::series_field uf(u);

  sgs::cosine_series V0 = sgs::cosine_series::constant(1, 4.0);
  sgs::losses l = sgs::empirical_losses(uf, V0, S);
  CHECK(l.e == doctest::Approx(4.0).epsilon(1e-14));

  sgs::cosine_series V = benchmark_potential();
  sgs::losses lv = sgs::empirical_losses(uf, V, S);
  double mean_v = 0.0;
  for (long j = 0; j < S.n; ++j) mean_v += V.evaluate(S.X.row(j).data());
  mean_v /= static_cast<double>(S.n);
  CHECK(lv.e == doctest::Approx(mean_v).epsilon(1e-13));

  // doubling u rescales numerator and denominator by the same power of two
  sgs::cosine_series u2 = sgs::scaled(u, 2.0);
  sgs::series_field u2f(u2);
  CHECK(sgs::empirical_losses(u2f, V, S).e == lv.e);

  sgs::cosine_series zero(1);
  sgs::series_field zf(zero);
  CHECK_THROWS_AS(sgs::empirical_losses(zf, V, S), sgs::error);
}

TEST_CASE("population losses: analytic integrals") {
  sgs::quad_rule rule = sgs::tensor_gauss(1, 64);
  sgs::cosine_series one = sgs::cosine_series::constant(1, 1.0);
  sgs::series_field onef(one);
  sgs::losses l1 = sgs::population_losses(onef, one, rule);
  CHECK(l1.e == doctest::Approx(1.0).epsilon(1e-14));

  sgs::cosine_series c(1);
  c.set({1}, 1.0);
  sgs::series_field cf(c);
  sgs::losses lc = sgs::population_losses(cf, one, rule);
  CHECK(lc.e == doctest::Approx(1.0 + PI * PI).epsilon(1e-12));

  // ground state reproduces lambda0 through quadrature
  sgs::cosine_series V = benchmark_potential();
  sgs::ground_truth t = sgs::solve_ground_truth(V, {.cutoff = 32});
  sgs::series_field uf(t.ustar);
  sgs::losses ls = sgs::population_losses(uf, V, rule);
  CHECK(std::abs(ls.e - t.lambda0) < 1e-8);
}

TEST_CASE("error metrics against the reference eigenpair") {
  sgs::cosine_series one = sgs::cosine_series::constant(1, 1.0);
  sgs::ground_truth t = sgs::solve_ground_truth(one, {.cutoff = 8});
  sgs::quad_rule rule = sgs::tensor_gauss(1, 48);

  sgs::series_field uf(t.ustar);
  sgs::eval_report r = sgs::error_metrics(uf, one, t, rule);
  CHECK(r.overlap == doctest::Approx(1.0).epsilon(1e-10));
  // sqrt(1 - overlap^2) turns ulp-level overlap error into ~1e-8
  CHECK(r.p_perp_l2 < 1e-6);
  CHECK(r.p_perp_h1 < 1e-6);
  CHECK(r.l2_norm == doctest::Approx(1.0).epsilon(1e-12));

  // second eigenfunction: orthogonal direction
  sgs::cosine_series u1(1);
  u1.set({1}, std::sqrt(2.0));
  sgs::series_field u1f(u1);
  sgs::eval_report r1 = sgs::error_metrics(u1f, one, t, rule);
  CHECK(std::abs(r1.overlap) < 1e-12);
  CHECK(r1.p_perp_l2 == doctest::Approx(1.0).epsilon(1e-10));

  // equal mixture: the stability bound's equality case
  sgs::cosine_series mix = sgs::lin(t.ustar, 1.0 / std::sqrt(2.0), u1, 1.0 / std::sqrt(2.0));
  sgs::series_field mf(mix);
  sgs::eval_report rm = sgs::error_metrics(mf, one, t, rule);
  CHECK(rm.p_perp_l2 * rm.p_perp_l2 == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(rm.energy - t.lambda0 == doctest::Approx(0.5 * (t.lambda1 - t.lambda0)).epsilon(1e-8));
}

TEST_CASE("overlap and perpendicular mass decompose the unit") {
  sgs::cosine_series V = benchmark_potential();
  sgs::ground_truth t = sgs::solve_ground_truth(V, {.cutoff = 16});
  sgs::quad_rule rule = sgs::tensor_gauss(1, 48);
  sgs::counter_rng r(8, sgs::stream::optimizer);
  for (int trial = 0; trial < 20; ++trial) {
    sgs::cosine_series u(1);
    for (int k = 0; k <= 5; ++k) u.set({k}, r.uniform(-1.0, 1.0));
    sgs::series_field uf(u);
    sgs::eval_report rep = sgs::error_metrics(uf, V, t, rule);
    CHECK(rep.p_perp_l2 * rep.p_perp_l2 + rep.overlap * rep.overlap ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.energy >= t.lambda0 - 1e-6); // variational principle
    CHECK(rep.p_perp_h1 >= rep.p_perp_l2 - 1e-12);
  }
}

TEST_CASE("empirical losses approach population losses at the Monte Carlo rate") {
  sgs::cosine_series V = benchmark_potential();
  sgs::cosine_series u(1);
  u.set({0}, 1.0);
  u.set({1}, 0.3);
  sgs::series_field uf(u);
  const double pop = sgs::population_losses(uf, V, sgs::tensor_gauss(1, 48)).e;

  const std::vector<long> ns{1000, 10000, 100000};
  std::vector<double> med_err;
  for (long n : ns) {
    std::vector<double> errs;
    for (int s = 0; s < 20; ++s) {
      sgs::sample_set S = sgs::sample(1, n, 40 + s);
      errs.push_back(std::abs(sgs::empirical_losses(uf, V, S).e - pop));
    }
    std::sort(errs.begin(), errs.end());
    med_err.push_back(0.5 * (errs[9] + errs[10]));
  }
  const double slope = (std::log(med_err[2]) - std::log(med_err[0])) /
                       (std::log(1e5) - std::log(1e3));
  CHECK(slope <= -0.3);
  CHECK(slope >= -0.7);
}

} // TEST_SUITE

} // namespace
