#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "series.hpp"

namespace sgs {

// Spectral Galerkin discretization of H = -Laplace + V on [0,1]^d with Neumann
// conditions, over span{Phi_k : |k|_inf <= cutoff}. The Gram matrix is diagonal
// (cosine orthogonality), so the generalized eigenproblem reduces to a standard
// symmetric one.
struct galerkin_config {
  int cutoff = 16;
  int max_basis = 20000; // dense eigensolve feasibility cap
};

struct ground_truth {
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  double gap = 0.0;
  cosine_series ustar; // L2-normalized, coefficient at k=0 positive
  int cutoff = 0;
  ground_truth() : ustar(1) {}
};

struct eigenpair {
  double lambda = 0.0;
  cosine_series u;
  int iterations = 0;
  eigenpair() : u(1) {}
};

// Bounds of V over a fixed low-discrepancy validation grid (1e4 * d points).
std::pair<double, double> potential_range(const cosine_series& V);
// Positivity check of V over the same grid; throws an assumption error if the
// grid minimum is not strictly positive.
void validate_potential(const cosine_series& V);

// Stiffness matrix H and (diagonal) Gram matrix; basis order is lexicographic.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> assemble(const cosine_series& V,
                                                     const galerkin_config& cfg);

ground_truth solve_ground_truth(const cosine_series& V, const galerkin_config& cfg);

// Galerkin solution u of Hu = f within the cutoff; rejects f with frequencies
// above the cutoff.
cosine_series apply_inverse(const cosine_series& V, const cosine_series& f,
                            const galerkin_config& cfg);

// Inverse power iteration from the constant start, stopping when successive
// Rayleigh quotients differ by less than tol.
eigenpair power_iterate(const cosine_series& V, const galerkin_config& cfg, double tol,
                        int max_iters);

// For each cutoff K: ground-state Barron norm of order s+2.
std::vector<std::pair<int, double>> barron_saturation(const cosine_series& V, double s,
                                                      const std::vector<int>& cutoffs);

// Exact Rayleigh quotient of a finite cosine series (series algebra, no grid).
double exact_energy(const cosine_series& V, const cosine_series& u);

} // namespace sgs
