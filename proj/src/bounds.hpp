#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "galerkin.hpp"
#include "series.hpp"

namespace sgs {

// Closed-form constants attached to the constrained two-layer class, plus the
// covering/entropy machinery that turns them into statistical-error bounds.
struct class_params {
  double B = 1.0;
  int m = 1;
  int d = 1;
  double v_min = 1.0;
  double v_max = 1.0;
  double tau() const;
};

struct envelope_set {
  double m_f = 0.0; // sup-norm envelope of the class, 16B
  double m_1 = 0.0; // envelope of u^2, (16B)^2
  double m_2 = 0.0; // envelope of |grad u|^2 + V u^2, (1+V_max)(16B)^2
};

envelope_set envelopes(const class_params& p);

// Working Lipschitz constants of the squared-function and energy-integrand
// classes with respect to the network parameters.
std::pair<double, double> lambda_bounds(const class_params& p);

// ln of the parameter-space covering count
//   M(delta) = (4BL/delta) (12BL/delta)^m (3L/delta)^{dm} (3L/delta)^m,
// evaluated in log space.
double covering_log(double delta, double lambda, int m, int d, double B);

// Entropy-integral bound (12/sqrt(n)) * int_0^M sqrt(max(ln M(eps),0)) deps,
// with the eps -> 0 endpoint handled by the substitution eps = e^{-t^2} and
// panels truncated below 1e-12 relative contribution.
double dudley_bound(double envelope, double lambda, int m, int d, double B, long n);

struct xi_set {
  double xi1 = 0.0;
  double xi2 = 0.0;
  double xi3 = 0.0;
  double eta = 0.0;
};

// Statistical-error scalars; r1/r2 are Rademacher complexities of the squared
// and energy-integrand classes (Dudley bounds or empirical estimates).
xi_set xi_eta(const class_params& p, long n, double delta, double r1, double r2);

double eta_bound(double B, int m); // B(6 ln m + 30)/sqrt(m)

struct bound_value {
  bool feasible = false;
  double value = 0.0;
};

// Excess-energy bound (M2 xi1 + xi2)/(1 - xi1) + (M2 xi3 + xi2)/(1 - xi3)
// + approx_gap; infeasible when xi1 >= 1 or xi3 >= 1.
bound_value oracle_rhs(double xi1, double xi2, double xi3, double m2, double approx_gap);

// Width-m energy bound (2(1+V_max)(sqrt(lambda*/min(1,V_min)) + 1) + 3 lambda*) * eta,
// valid only under eta <= 1/2.
bound_value energy_diff_bound(double lambda_star, double v_min, double v_max, double eta);

struct stability_report {
  double l2_lhs = 0.0, l2_rhs = 0.0, l2_slack = 0.0;
  double h1_lhs = 0.0, h1_rhs = 0.0, h1_slack = 0.0;
  bool l2_violation = false, h1_violation = false;
};

// Directional-error inequalities against the reference eigenpair: slack is
// RHS - LHS, flagged as a violation below -1e-8 * max(1, RHS).
stability_report stability_check(double excess, double p_perp_l2, double p_perp_h1,
                                 const ground_truth& truth, double v_min, double v_max,
                                 double l2_norm_of_u);

struct stability_trials_result {
  long trials = 0;
  long l2_violations = 0;
  long h1_violations = 0;
  double min_l2_slack = 0.0;
  double min_h1_slack = 0.0;
};

// Random normalized trial functions drawn inside the reference Galerkin span,
// evaluated with exact series algebra (no quadrature error).
stability_trials_result stability_trials(const cosine_series& V, int cutoff, long trials,
                                         std::uint64_t seed, double v_min, double v_max);

enum class g_class {
  plain,     // the functions u themselves
  squared,   // u^2
  integrand, // |grad u|^2 + V u^2
};

struct rademacher_config {
  int n_sigma = 8;
  int n_restarts = 4;
  long steps = 400;
  double lr0 = 0.05;
  double lr1 = 0.005;
  std::uint64_t seed = 1;
};

// Lower-bound estimate of the empirical Rademacher complexity: projected
// gradient ascent of |n^{-1} sum sigma_j g(X_j)| with restarts, averaged over
// sign vectors. m = 0 in params selects the constants-only class.
double rademacher_estimate(g_class cls, const class_params& p, const cosine_series& V,
                           long n, const rademacher_config& rc);

struct bounds_report {
  envelope_set env;
  double lambda1 = 0.0, lambda2 = 0.0;
  double rademacher_bound_1 = 0.0, rademacher_bound_2 = 0.0;
  std::optional<double> rademacher_empirical_1, rademacher_empirical_2;
  xi_set xi;
  bound_value oracle;
  long n = 0;
  double delta = 0.0;
  double approx_gap = 0.0;
  class_params params;
};

// Full constants table; the empirical estimates run only when V is supplied.
bounds_report make_bounds_report(const class_params& p, long n, double delta,
                                 double approx_gap, const cosine_series* V,
                                 const rademacher_config& rc);

} // namespace sgs
