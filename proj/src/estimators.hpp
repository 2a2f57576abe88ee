#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "galerkin.hpp"
#include "network.hpp"
#include "quadrature.hpp"
#include "series.hpp"

namespace sgs {

// n i.i.d. uniform points on [0,1]^d; point j is a pure function of
// (seed, j), so the set is reproducible and order-independent.
struct sample_set {
  int dim = 1;
  long n = 0;
  std::uint64_t seed = 0;
  Eigen::MatrixXd X; // n x dim
};

sample_set sample(int dim, long n, std::uint64_t seed);

// Batched evaluation interface shared by cosine series and networks.
class scalar_field {
public:
  virtual ~scalar_field() = default;
  virtual int dim() const = 0;
  virtual void eval(const Eigen::MatrixXd& X, Eigen::VectorXd& u,
                    Eigen::MatrixXd& gradu) const = 0;
};

class series_field final : public scalar_field {
public:
  explicit series_field(const cosine_series& s) : s_(&s) {}
  int dim() const override { return s_->dim(); }
  void eval(const Eigen::MatrixXd& X, Eigen::VectorXd& u,
            Eigen::MatrixXd& gradu) const override;

private:
  const cosine_series* s_;
};

class net_field final : public scalar_field {
public:
  explicit net_field(const two_layer_net& n) : n_(&n) {}
  int dim() const override { return n_->d; }
  void eval(const Eigen::MatrixXd& X, Eigen::VectorXd& u,
            Eigen::MatrixXd& gradu) const override;

private:
  const two_layer_net* n_;
};

Eigen::VectorXd eval_series_values(const cosine_series& s, const Eigen::MatrixXd& X);

struct losses {
  double e_v = 0.0; // kinetic-plus-potential quadratic form (mean)
  double e_2 = 0.0; // L2 mass (mean)
  double e = 0.0;   // Rayleigh ratio
};

// Sample means of |grad u|^2 + V u^2 and u^2 over the set, and their ratio.
losses empirical_losses(const scalar_field& u, const cosine_series& V,
                        const sample_set& S);
// Quadrature versions of the same integrals.
losses population_losses(const scalar_field& u, const cosine_series& V,
                         const quad_rule& rule);

struct eval_report {
  double energy = 0.0;
  double e_v = 0.0;
  double e_2 = 0.0;
  double l2_norm = 0.0;
  double h1_norm = 0.0;
  double overlap = 0.0;   // <u/||u||, u*>
  double p_perp_l2 = 0.0; // sqrt(1 - overlap^2)
  double p_perp_h1 = 0.0; // adds the H1 seminorm of u/||u|| - overlap*u*
};

eval_report error_metrics(const scalar_field& u, const cosine_series& V,
                          const ground_truth& truth, const quad_rule& rule);

} // namespace sgs
