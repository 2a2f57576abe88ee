#pragma once

#include <vector>

namespace sgs {

// Quadrature rules on [0,1]^d with weights summing to 1 (the domain has unit
// volume, so integrals and means coincide).
struct quad_rule {
  int dim = 1;
  std::vector<double> nodes;   // count*dim, row-major points
  std::vector<double> weights; // count entries
  std::size_t count() const { return weights.size(); }
  const double* point(std::size_t j) const { return nodes.data() + j * dim; }
};

// Gauss-Legendre nodes/weights on [0,1]; exact for polynomials of degree 2n-1.
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Tensor product of the 1d Gauss rule, order points per dimension.
quad_rule tensor_gauss(int dim, int order);

// Halton low-discrepancy points (prime bases 2,3,5,...), equal weights.
quad_rule halton_rule(int dim, std::size_t count);
// Raw Halton points only (for grid scans), row-major count*dim.
std::vector<double> halton_points(int dim, std::size_t count);

// Default population rule: tensor Gauss for low dimension, Halton beyond it,
// where the tensor grid would be wasteful.
quad_rule default_rule(int dim, int gauss_order = 48, std::size_t qmc_count = 131072);

} // namespace sgs
