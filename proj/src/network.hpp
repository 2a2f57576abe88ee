#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace sgs {

// Two-layer trial functions u(x) = c + sum_i gamma_i SP_tau(w_i . x - t_i) with
// the constraint set |c| <= 2B, sum|gamma| <= 4B, |w_i|_1 = 1, |t_i| <= 1.
// tau = sqrt(m) couples the activation sharpness to the width.
struct two_layer_net {
  int d = 1;
  int m = 0;
  double tau = 1.0;
  double B = 1.0;
  double c = 0.0;
  Eigen::VectorXd gamma; // m
  Eigen::MatrixXd w;     // m x d, row i is w_i
  Eigen::VectorXd t;     // m
  // deterministic reinitialization source for zero inner-weight rows
  std::uint64_t reinit_seed = 0;
  std::uint64_t reinit_counter = 0;
};

struct param_gradient {
  double c = 0.0;
  Eigen::VectorXd gamma;
  Eigen::MatrixXd w;
  Eigen::VectorXd t;
};

// Rescaled softplus SP_tau(z) = ln(1+e^{tau z})/tau, evaluated in the two-sided
// stable form (max(a,0)+log1p(e^{-|a|}))/tau, a = tau z; for a > 30 this is the
// shifted branch z + log1p(e^{-a})/tau with the naive formula's overflow removed.
double softplus_tau(double z, double tau);
// Its z-derivative: logistic sigmoid of tau z.
double softplus_tau_prime(double z, double tau);

double net_evaluate(const two_layer_net& net, const double* x);
void net_spatial_gradient(const two_layer_net& net, const double* x, double* out);

// Reusable buffers for batched evaluation; sized on first use, grown as needed.
// A holds pre-activations tau*z, S softplus values, G sigmoid values. The
// gradient pass reuses A and S as scratch, so call order is forward then
// weighted_gradient on the same workspace and sample block.
struct net_workspace {
  Eigen::MatrixXd A, S, G;
};

// Batched u and spatial gradient over rows of X (n x d).
void net_forward(const two_layer_net& net, const Eigen::MatrixXd& X, net_workspace& ws,
                 Eigen::VectorXd& u, Eigen::MatrixXd& gradu);

// Gradient of J = sum_j a_j u(x_j) + sum_j b_j . grad u(x_j) with respect to all
// parameters; a is n, bmat is n x d. Consumes the S/G of the preceding forward.
param_gradient net_weighted_gradient(const two_layer_net& net, const Eigen::MatrixXd& X,
                                     net_workspace& ws, const Eigen::VectorXd& a,
                                     const Eigen::MatrixXd& bmat);

// Empirical Rayleigh quotient and its parameter gradient on sample rows X with
// potential values Vx. Returns the loss pieces through the out-parameters.
param_gradient param_gradient_rayleigh(const two_layer_net& net, const Eigen::MatrixXd& X,
                                       const Eigen::VectorXd& Vx, double* e_nv,
                                       double* e_n2, double* e_n);
// Buffer-reusing form for optimization loops; ws/u/gradu are resized on first
// use and keep their storage across calls.
param_gradient param_gradient_rayleigh(const two_layer_net& net, const Eigen::MatrixXd& X,
                                       const Eigen::VectorXd& Vx, net_workspace& ws,
                                       Eigen::VectorXd& u, Eigen::MatrixXd& gradu,
                                       double* e_nv, double* e_n2, double* e_n);

// Componentwise projection onto the constraint set; idempotent bit-for-bit.
void project(two_layer_net& net);

// Seeded start: w_i uniform on the l1 sphere, t_i uniform in [-1,1], gamma_i
// uniform in [-4B/m, 4B/m], c = min(1, 2B), tau = sqrt(m), then projected.
two_layer_net net_init(int dim, int m, double B, std::uint64_t seed);

// Constraint-set membership; the l1 rows are accepted within 16 ulps of 1.
bool in_class(const two_layer_net& net);

// Flat parameter vector [c, gamma, w row-major, t] for generic optimizers.
Eigen::VectorXd pack_params(const two_layer_net& net);
// Inverse of pack_params; net supplies the shape.
void unpack_params(const Eigen::VectorXd& theta, two_layer_net& net);
Eigen::VectorXd pack_gradient(const param_gradient& g);

} // namespace sgs
