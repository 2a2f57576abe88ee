#include "network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace sgs {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kRowTol = 16.0 * kEps; // accepted |w_i|_1 deviation from 1

void check_net(const two_layer_net& net) {
  require(net.d >= 1 && net.m >= 0, errc::invalid_input, "invalid network sizes");
  require(net.tau > 0.0, errc::invalid_input, "tau must be > 0");
  require(net.B > 0.0, errc::invalid_input, "budget B must be > 0");
  require(net.gamma.size() == net.m && net.t.size() == net.m && net.w.rows() == net.m &&
              net.w.cols() == net.d,
          errc::invalid_input, "network parameter shapes disagree");
}

// one draw of a uniform l1-sphere direction: signed exponentials, normalized
void draw_l1_row(counter_rng& rng, int d, double* out) {
  for (;;) {
    double sum = 0.0;
    for (int j = 0; j < d; ++j) {
      const double e = -std::log1p(-rng.uniform());
      const double s = rng.uniform() < 0.5 ? -1.0 : 1.0;
      out[j] = s * e;
      sum += e;
    }
    if (sum > 0.0) {
      for (int j = 0; j < d; ++j) out[j] /= sum;
      return;
    }
  }
}
} // namespace

double softplus_tau(double z, double tau) {
  require(tau > 0.0, errc::invalid_input, "tau must be > 0");
  const double a = tau * z;
  return (std::max(a, 0.0) + std::log1p(std::exp(-std::abs(a)))) / tau;
}

double softplus_tau_prime(double z, double tau) {
  require(tau > 0.0, errc::invalid_input, "tau must be > 0");
  const double a = tau * z;
  const double e = std::exp(-std::abs(a));
  return a >= 0.0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
}

double net_evaluate(const two_layer_net& net, const double* x) {
  double sum = net.c;
  for (int i = 0; i < net.m; ++i) {
    double z = -net.t[i];
    for (int j = 0; j < net.d; ++j) z += net.w(i, j) * x[j];
    sum += net.gamma[i] * softplus_tau(z, net.tau);
  }
  return sum;
}

void net_spatial_gradient(const two_layer_net& net, const double* x, double* out) {
  for (int j = 0; j < net.d; ++j) out[j] = 0.0;
  for (int i = 0; i < net.m; ++i) {
    double z = -net.t[i];
    for (int j = 0; j < net.d; ++j) z += net.w(i, j) * x[j];
    const double gs = net.gamma[i] * softplus_tau_prime(z, net.tau);
    for (int j = 0; j < net.d; ++j) out[j] += gs * net.w(i, j);
  }
}

void net_forward(const two_layer_net& net, const Eigen::MatrixXd& X, net_workspace& ws,
                 Eigen::VectorXd& u, Eigen::MatrixXd& gradu) {
  check_net(net);
  require(X.cols() == net.d, errc::invalid_input, "sample dimension mismatch");
  const long n = X.rows();
  if (net.m == 0) {
    u.setConstant(n, net.c);
    gradu.setZero(n, net.d);
    return;
  }
  ws.A.noalias() = X * net.w.transpose();
  ws.A = net.tau * (ws.A.rowwise() - net.t.transpose());
  ws.G = (-ws.A.array().abs()).exp().matrix(); // e^{-|a|}
  ws.S = ((ws.A.array().max(0.0) + ws.G.array().log1p()) / net.tau).matrix();
  ws.G = (ws.A.array() >= 0.0)
             .select(1.0 / (1.0 + ws.G.array()), ws.G.array() / (1.0 + ws.G.array()))
             .matrix();
  u = ws.S * net.gamma;
  u.array() += net.c;
  gradu.noalias() = ws.G * (net.gamma.asDiagonal() * net.w);
}

param_gradient net_weighted_gradient(const two_layer_net& net, const Eigen::MatrixXd& X,
                                     net_workspace& ws, const Eigen::VectorXd& a,
                                     const Eigen::MatrixXd& bmat) {
  check_net(net);
  param_gradient g;
  g.c = a.sum();
  g.gamma.setZero(net.m);
  g.t.setZero(net.m);
  g.w.setZero(net.m, net.d);
  if (net.m == 0) return g;
  // P = bmat W^T reuses A; T1 = a.G + tau G(1-G)P reuses S.
  ws.A.noalias() = bmat * net.w.transpose();
  g.gamma.noalias() = ws.S.transpose() * a;
  g.gamma += (ws.G.array() * ws.A.array()).colwise().sum().matrix().transpose();
  ws.S = ((ws.G.array().colwise() * a.array()) +
          net.tau * (ws.G.array() * (1.0 - ws.G.array()) * ws.A.array()))
             .matrix();
  g.w.noalias() = ws.S.transpose() * X;
  g.w.noalias() += ws.G.transpose() * bmat;
  g.w = net.gamma.asDiagonal() * g.w;
  g.t = -(net.gamma.array() * ws.S.colwise().sum().transpose().array()).matrix();
  return g;
}

param_gradient param_gradient_rayleigh(const two_layer_net& net, const Eigen::MatrixXd& X,
                                       const Eigen::VectorXd& Vx, double* e_nv,
                                       double* e_n2, double* e_n) {
  net_workspace ws;
  Eigen::VectorXd u;
  Eigen::MatrixXd gradu;
  return param_gradient_rayleigh(net, X, Vx, ws, u, gradu, e_nv, e_n2, e_n);
}

param_gradient param_gradient_rayleigh(const two_layer_net& net, const Eigen::MatrixXd& X,
                                       const Eigen::VectorXd& Vx, net_workspace& ws,
                                       Eigen::VectorXd& u, Eigen::MatrixXd& gradu,
                                       double* e_nv, double* e_n2, double* e_n) {
  require(Vx.size() == X.rows(), errc::invalid_input, "potential values size mismatch");
  const long n = X.rows();
  require(n >= 1, errc::invalid_input, "empty sample set");
  net_forward(net, X, ws, u, gradu);
  const double env = (gradu.array().square().rowwise().sum() +
                      Vx.array() * u.array().square())
                         .mean();
  const double en2 = u.array().square().mean();
  require(en2 > 0.0 && std::isfinite(en2), errc::numeric,
          "degenerate trial function: empirical L2 mass vanished");
  const double en = env / en2;
  if (e_nv) *e_nv = env;
  if (e_n2) *e_n2 = en2;
  if (e_n) *e_n = en;
  // quotient rule: dE = (2/(n E2)) sum_j [ (V_j - E) u_j du_j + grad u_j . d grad u_j ]
  const double s = 2.0 / (static_cast<double>(n) * en2);
  const Eigen::VectorXd a = s * (u.array() * (Vx.array() - en)).matrix();
  const Eigen::MatrixXd bmat = s * gradu;
  return net_weighted_gradient(net, X, ws, a, bmat);
}

void project(two_layer_net& net) {
  check_net(net);
  for (int i = 0; i < net.m; ++i) {
    double s = net.w.row(i).lpNorm<1>();
    if (s == 0.0) {
      counter_rng rng(net.reinit_seed + net.reinit_counter++, stream::reinit);
      Eigen::VectorXd row(net.d);
      draw_l1_row(rng, net.d, row.data());
      net.w.row(i) = row.transpose();
      s = net.w.row(i).lpNorm<1>();
    }
    if (std::abs(s - 1.0) > kRowTol) net.w.row(i) /= s;
  }
  for (int i = 0; i < net.m; ++i) net.t[i] = std::clamp(net.t[i], -1.0, 1.0);
  const double cap = 4.0 * net.B;
  for (int pass = 0; pass < 64; ++pass) {
    const double sg = net.gamma.lpNorm<1>();
    if (sg <= cap) break;
    net.gamma *= cap / sg;
  }
  net.c = std::clamp(net.c, -2.0 * net.B, 2.0 * net.B);
}

two_layer_net net_init(int dim, int m, double B, std::uint64_t seed) {
  require(dim >= 1, errc::invalid_input, "dimension must be >= 1");
  require(m >= 1, errc::invalid_input, "width must be >= 1");
  require(B > 0.0, errc::invalid_input, "budget B must be > 0");
  two_layer_net net;
  net.d = dim;
  net.m = m;
  net.tau = std::sqrt(static_cast<double>(m));
  net.B = B;
  net.gamma.resize(m);
  net.t.resize(m);
  net.w.resize(m, dim);
  net.reinit_seed = seed;
  counter_rng rng(seed, stream::init);
  std::vector<double> row(dim);
  for (int i = 0; i < m; ++i) {
    draw_l1_row(rng, dim, row.data());
    for (int j = 0; j < dim; ++j) net.w(i, j) = row[j];
    net.t[i] = rng.uniform(-1.0, 1.0);
    net.gamma[i] = rng.uniform(-1.0, 1.0) * 4.0 * B / static_cast<double>(m);
  }
  net.c = std::min(1.0, 2.0 * B);
  project(net);
  return net;
}

bool in_class(const two_layer_net& net) {
  if (!(net.tau > 0.0) || !(net.B > 0.0)) return false;
  if (!std::isfinite(net.c) || std::abs(net.c) > 2.0 * net.B) return false;
  if (!net.gamma.allFinite() || !net.t.allFinite() || !net.w.allFinite()) return false;
  if (net.gamma.lpNorm<1>() > 4.0 * net.B) return false;
  for (int i = 0; i < net.m; ++i) {
    if (std::abs(net.t[i]) > 1.0) return false;
    if (std::abs(net.w.row(i).lpNorm<1>() - 1.0) > kRowTol) return false;
  }
  return true;
}



Eigen::VectorXd pack_params(const two_layer_net& net) {
  const int m = net.m, d = net.d;
  Eigen::VectorXd theta(1 + m + m * d + m);
  theta[0] = net.c;
  theta.segment(1, m) = net.gamma;
  for (int i = 0; i < m; ++i) theta.segment(1 + m + i * d, d) = net.w.row(i).transpose();
  theta.segment(1 + m + m * d, m) = net.t;
  return theta;
}

void unpack_params(const Eigen::VectorXd& theta, two_layer_net& net) {
  const int m = net.m, d = net.d;
  require(theta.size() == 1 + m + m * d + m, errc::invalid_input,
          "parameter vector size mismatch");
  net.c = theta[0];
  net.gamma = theta.segment(1, m);
  for (int i = 0; i < m; ++i) net.w.row(i) = theta.segment(1 + m + i * d, d).transpose();
  net.t = theta.segment(1 + m + m * d, m);
}

Eigen::VectorXd pack_gradient(const param_gradient& g) {
  const int m = static_cast<int>(g.gamma.size());
  const int d = m > 0 ? static_cast<int>(g.w.cols()) : 0;
  Eigen::VectorXd v(1 + m + m * d + m);
  v[0] = g.c;
  v.segment(1, m) = g.gamma;
  for (int i = 0; i < m; ++i) v.segment(1 + m + i * d, d) = g.w.row(i).transpose();
  v.segment(1 + m + m * d, m) = g.t;
  return v;
}

} // namespace sgs
