#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "errors.hpp"
#include "estimators.hpp"
#include "network.hpp"
#include "rng.hpp"

namespace {

sgs::two_layer_net tiny_net(double c, double gamma, double w, double t, double tau) {
  sgs::two_layer_net net;
  net.d = 1;
  net.m = 1;
  net.tau = tau;
  net.B = 10.0;
  net.c = c;
  net.gamma = Eigen::VectorXd::Constant(1, gamma);
  net.w = Eigen::MatrixXd::Constant(1, 1, w);
  net.t = Eigen::VectorXd::Constant(1, t);
  return net;
}

double rayleigh_at(const Eigen::VectorXd& theta, sgs::two_layer_net net,
                   const Eigen::MatrixXd& X, const Eigen::VectorXd& Vx) {
  sgs::unpack_params(theta, net);
  double ev = 0, e2 = 0, en = 0;
  sgs::param_gradient_rayleigh(net, X, Vx, &ev, &e2, &en);
  return en;
}

TEST_SUITE("network") {

TEST_CASE("rescaled softplus: values and stability") {
  CHECK(sgs::softplus_tau(0.0, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(sgs::softplus_tau(100.0, 1.0) == doctest::Approx(100.0).epsilon(1e-15));
  CHECK(std::isfinite(sgs::softplus_tau(1e6, 1.0)));
  CHECK(std::isfinite(sgs::softplus_tau(-1e6, 1.0)));
  CHECK(sgs::softplus_tau(1.0, 4.0) ==
        doctest::Approx(1.0045374819794524).epsilon(1e-15));
  CHECK(sgs::softplus_tau_prime(0.0, 3.0) == 0.5);
  CHECK(sgs::softplus_tau_prime(50.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sgs::softplus_tau_prime(-50.0, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(sgs::softplus_tau(1.0, 0.0), sgs::error);
}

TEST_CASE("evaluation closed forms") {
  sgs::two_layer_net net = tiny_net(0.0, 1.0, 1.0, 0.0, 1.0);
  const double x0 = 0.0;
  CHECK(sgs::net_evaluate(net, &x0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));

  // zero outer weights give the constant c
  sgs::two_layer_net flat = sgs::net_init(2, 4, 1.0, 3);
  flat.gamma.setZero();
  std::vector<double> x{0.3, 0.8};
  CHECK(sgs::net_evaluate(flat, x.data()) == flat.c);
  double g[2];
  sgs::net_spatial_gradient(flat, x.data(), g);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 0.0);

  // antisymmetric pair cancels
  sgs::two_layer_net pair;
  pair.d = 1;
  pair.m = 2;
  pair.tau = 2.0;
  pair.B = 1.0;
  pair.c = 0.25;
  pair.gamma = Eigen::Vector2d(1.0, -1.0);
  pair.w = Eigen::MatrixXd::Constant(2, 1, 1.0);
  pair.t = Eigen::Vector2d(0.4, 0.4);
  const double xp = 0.7;
  CHECK(sgs::net_evaluate(pair, &xp) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("spatial gradient: closed form and finite differences") {
  sgs::two_layer_net net = tiny_net(0.0, 1.0, 1.0, 0.0, 1.0);
  const double x0 = 0.0;
  double g = 0.0;
  sgs::net_spatial_gradient(net, &x0, &g);
  CHECK(g == doctest::Approx(0.5).epsilon(1e-15)); // sigmoid(0) * w

  sgs::two_layer_net rnd = sgs::net_init(3, 7, 2.0, 91);
  sgs::counter_rng r(17, sgs::stream::sampling);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> x{r.uniform(), r.uniform(), r.uniform()};
    double grad[3];
    sgs::net_spatial_gradient(rnd, x.data(), grad);
    for (int i = 0; i < 3; ++i) {
      const double h = 1e-5;
      std::vector<double> xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fd =
          (sgs::net_evaluate(rnd, xp.data()) - sgs::net_evaluate(rnd, xm.data())) / (2 * h);
      CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("batched forward matches the scalar path") {
  sgs::two_layer_net net = sgs::net_init(2, 6, 1.5, 5);
  sgs::sample_set S = sgs::sample(2, 40, 77);
  sgs::net_workspace ws;
  Eigen::VectorXd u;
  Eigen::MatrixXd gradu;
  sgs::net_forward(net, S.X, ws, u, gradu);
  for (long j = 0; j < S.n; ++j) {
    std::vector<double> x{S.X(j, 0), S.X(j, 1)};
    CHECK(u[j] == doctest::Approx(sgs::net_evaluate(net, x.data())).epsilon(1e-14));
    double g[2];
    sgs::net_spatial_gradient(net, x.data(), g);
    CHECK(gradu(j, 0) == doctest::Approx(g[0]).epsilon(1e-14));
    CHECK(gradu(j, 1) == doctest::Approx(g[1]).epsilon(1e-14));
  }
}

TEST_CASE("weighted-gradient kernel matches finite differences") {
  sgs::two_layer_net net = sgs::net_init(2, 5, 1.0, 13);
  sgs::sample_set S = sgs::sample(2, 12, 31);
  sgs::counter_rng r(99, sgs::stream::optimizer);
  Eigen::VectorXd a(S.n);
  Eigen::MatrixXd b(S.n, 2);
  for (long j = 0; j < S.n; ++j) {
    a[j] = r.uniform(-1.0, 1.0);
    b(j, 0) = r.uniform(-1.0, 1.0);
    b(j, 1) = r.uniform(-1.0, 1.0);
  }
  auto J = [&](const Eigen::VectorXd& theta) {
    sgs::two_layer_net n2 = net;
    sgs::unpack_params(theta, n2);
    sgs::net_workspace ws;
    Eigen::VectorXd u;
    Eigen::MatrixXd gradu;
    sgs::net_forward(n2, S.X, ws, u, gradu);
    return a.dot(u) + (b.array() * gradu.array()).sum();
  };
  sgs::net_workspace ws;
  Eigen::VectorXd u;
  Eigen::MatrixXd gradu;
  sgs::net_forward(net, S.X, ws, u, gradu);
  Eigen::VectorXd g = sgs::pack_gradient(sgs::net_weighted_gradient(net, S.X, ws, a, b));
  Eigen::VectorXd theta = sgs::pack_params(net);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd delta(theta.size());
    for (long i = 0; i < delta.size(); ++i) delta[i] = r.uniform(-1.0, 1.0);
    delta /= delta.norm();
    const double h = 1e-6;
    const double fd = (J(theta + h * delta) - J(theta - h * delta)) / (2 * h);
    CHECK(g.dot(delta) == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("Rayleigh parameter gradient: invariances and finite differences") {
  sgs::sample_set S = sgs::sample(2, 64, 5);
  sgs::cosine_series V = sgs::cosine_series::constant(2, 3.0);
  Eigen::VectorXd Vx = Eigen::VectorXd::Constant(S.n, 3.0);

  // constant trial: quotient is V0 for any c, so dE/dc = 0
  sgs::two_layer_net flat = sgs::net_init(2, 4, 1.0, 21);
  flat.gamma.setZero();
  flat.c = 1.0;
  double ev = 0, e2 = 0, en = 0;
  sgs::param_gradient g0 = sgs::param_gradient_rayleigh(flat, S.X, Vx, &ev, &e2, &en);
  CHECK(en == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(g0.c == doctest::Approx(0.0).epsilon(1e-12));

  sgs::two_layer_net net = sgs::net_init(2, 6, 1.0, 22);
  Eigen::VectorXd theta = sgs::pack_params(net);
  sgs::param_gradient g = sgs::param_gradient_rayleigh(net, S.X, Vx, &ev, &e2, &en);
  CHECK(en == doctest::Approx(ev / e2).epsilon(1e-14));
  Eigen::VectorXd gv = sgs::pack_gradient(g);
  sgs::counter_rng r(7, sgs::stream::optimizer);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd delta(theta.size());
    for (long i = 0; i < delta.size(); ++i) delta[i] = r.uniform(-1.0, 1.0);
    delta /= delta.norm();
    const double h = 1e-5;
    const double fd = (rayleigh_at(theta + h * delta, net, S.X, Vx) -
                       rayleigh_at(theta - h * delta, net, S.X, Vx)) /
                      (2 * h);
    CHECK(gv.dot(delta) == doctest::Approx(fd).epsilon(1e-5));
  }

  // quotient is exactly invariant under halving the function
  sgs::two_layer_net half = net;
  half.c *= 0.5;
  half.gamma *= 0.5;
  double ev2, e22, en2;
  sgs::param_gradient_rayleigh(half, S.X, Vx, &ev2, &e22, &en2);
  CHECK(en2 == en);

  // identically zero trial is degenerate
  sgs::two_layer_net zero = net;
  zero.c = 0.0;
  zero.gamma.setZero();
  CHECK_THROWS_AS(sgs::param_gradient_rayleigh(zero, S.X, Vx, &ev, &e2, &en), sgs::error);
}

TEST_CASE("projection: componentwise rules") {
  sgs::two_layer_net net;
  net.d = 2;
  net.m = 2;
  net.tau = std::sqrt(2.0);
  net.B = 1.0;
  net.c = -5.0;
  net.gamma = Eigen::Vector2d(3.0, -7.0);
  net.w.resize(2, 2);
  net.w << 0.5, 1.5, -0.2, 0.2;
  net.t = Eigen::Vector2d(1.7, -0.3);
  sgs::project(net);
  CHECK(net.c == -2.0); // clamp to [-2B, 2B]
  CHECK(net.gamma[0] == doctest::Approx(1.2).epsilon(1e-15));
  CHECK(net.gamma[1] == doctest::Approx(-2.8).epsilon(1e-15));
  CHECK(net.w(0, 0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(net.w(0, 1) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(net.t[0] == 1.0);
  CHECK(net.t[1] == -0.3);
  CHECK(sgs::in_class(net));
}

TEST_CASE("projection is idempotent bit-for-bit and lands in the class") {
  sgs::counter_rng r(6, sgs::stream::init);
  for (int trial = 0; trial < 200; ++trial) {
    sgs::two_layer_net net = sgs::net_init(2, 5, 0.8, 1000 + trial);
    net.c += r.uniform(-10.0, 10.0);
    net.gamma.array() += r.uniform(-5.0, 5.0);
    net.w.array() *= r.uniform(-3.0, 3.0);
    net.t.array() += r.uniform(-4.0, 4.0);
    sgs::project(net);
    CHECK(sgs::in_class(net));
    sgs::two_layer_net again = net;
    sgs::project(again);
    CHECK(again.c == net.c);
    CHECK(again.gamma == net.gamma);
    CHECK(again.w == net.w);
    CHECK(again.t == net.t);
  }
}

TEST_CASE("projection reinitializes an all-zero inner row deterministically") {
  sgs::two_layer_net a = sgs::net_init(2, 3, 1.0, 55);
  sgs::two_layer_net b = a;
  a.w.row(1).setZero();
  b.w.row(1).setZero();
  sgs::project(a);
  sgs::project(b);
  CHECK(a.w == b.w);
  CHECK(std::abs(a.w.row(1).lpNorm<1>() - 1.0) < 1e-12);
}

TEST_CASE("initialization: coupling, determinism, class membership") {
  sgs::two_layer_net net = sgs::net_init(1, 64, 1.0, 9);
  CHECK(net.tau == 8.0); // sqrt of the width
  CHECK(sgs::in_class(net));
  CHECK(net.c == 1.0);

  sgs::two_layer_net again = sgs::net_init(1, 64, 1.0, 9);
  CHECK(net.gamma == again.gamma);
  CHECK(net.w == again.w);
  CHECK(net.t == again.t);

  sgs::two_layer_net other = sgs::net_init(1, 64, 1.0, 10);
  CHECK(net.w != other.w);

  CHECK_THROWS_AS(sgs::net_init(1, 0, 1.0, 1), sgs::error);
  CHECK_THROWS_AS(sgs::net_init(1, 4, 0.0, 1), sgs::error);
}

TEST_CASE("class envelope: |u| and |grad u| stay under 16B") {
  const double B = 0.7;
  sgs::counter_rng r(12, sgs::stream::sampling);
  for (int k = 0; k < 20; ++k) {
    sgs::two_layer_net net = sgs::net_init(2, 9, B, 300 + k);
    for (int j = 0; j < 200; ++j) {
      std::vector<double> x{r.uniform(), r.uniform()};
      CHECK(std::abs(sgs::net_evaluate(net, x.data())) <= 16.0 * B);
      double g[2];
      sgs::net_spatial_gradient(net, x.data(), g);
      CHECK(std::abs(g[0]) <= 16.0 * B);
      CHECK(std::abs(g[1]) <= 16.0 * B);
    }
  }
}

TEST_CASE("parameter packing round-trips") {
  sgs::two_layer_net net = sgs::net_init(3, 4, 1.0, 71);
  Eigen::VectorXd theta = sgs::pack_params(net);
  CHECK(theta.size() == 1 + 4 + 4 * 3 + 4);
  sgs::two_layer_net copy = sgs::net_init(3, 4, 1.0, 72);
  sgs::unpack_params(theta, copy);
  CHECK(copy.c == net.c);
  CHECK(copy.gamma == net.gamma);
  CHECK(copy.w == net.w);
  CHECK(copy.t == net.t);
  CHECK_THROWS_AS(sgs::unpack_params(theta.head(5), copy), sgs::error);
}

} // TEST_SUITE

} // namespace
