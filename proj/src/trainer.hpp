#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "estimators.hpp"
#include "galerkin.hpp"
#include "network.hpp"
#include "series.hpp"

namespace sgs {

// Projected first-order minimization of the empirical Rayleigh quotient over
// the constrained two-layer class, width coupled to the sample count by
// m = ceil(sqrt(n)) unless pinned explicitly.
struct train_config {
  long n = 1024;
  int m = 0;        // 0 resolves to ceil(sqrt(n))
  double B = 0.0;   // 0 resolves to the reference Barron norm; else required
  long steps = 20000;
  double lr0 = 1e-2;
  double lr1 = 1e-4; // cosine decay target
  bool adam = true;  // false: plain projected gradient
  std::uint64_t seed = 1;
  int gauss_order = 48;          // population quadrature, d <= 3
  std::size_t qmc_count = 131072; // population quadrature, d >= 4
};

struct train_result {
  two_layer_net net;         // best-loss iterate
  std::vector<double> trace; // E_n per step, plus the post-final-step value
  double e_n = 0.0;          // best empirical loss
  double pop_energy = 0.0;   // population Rayleigh quotient of the best iterate
  train_config cfg;          // resolved config echo
  double wall_seconds = 0.0; // measured runtime; never serialized
  bool has_report = false;
  eval_report report;
  double excess = std::numeric_limits<double>::quiet_NaN();
};

train_result train(const cosine_series& V, const train_config& cfg,
                   const ground_truth* truth);

struct sweep_row {
  std::uint64_t seed = 0;
  long n = 0;
  int m = 0;
  double energy = 0.0;
  double excess = 0.0;
  double p_perp_l2 = 0.0;
  double p_perp_h1 = 0.0;
};

struct sweep_cell {
  long n = 0;
  int m = 0;
  double median_excess = 0.0;
  bool bound_feasible = false; // statistical-error terms admit a finite bound
  double bound_value = 0.0;    // oracle-style excess bound when feasible
  bool bound_holds = false;    // median <= bound (only meaningful when feasible)
};

struct sweep_result {
  std::vector<sweep_row> rows;
  std::vector<sweep_cell> cells;
  double slope = 0.0;          // log-log fit of median excess vs n
  bool slope_applicable = false; // false when medians sit below the 1e-8 floor
  ground_truth truth;
  double B = 0.0;
  double delta = 0.1;
};

// Requires at least 3 increasing n values and at least 5 seeds (base_seed,
// base_seed+1, ...). Every cell trains with m = ceil(sqrt(n)).
sweep_result sweep(const cosine_series& V, const std::vector<long>& n_list,
                   int seed_count, const train_config& tpl, int cutoff,
                   double delta = 0.1);

struct approx_row {
  int m = 0;
  double h1_best = 0.0;   // min over seeds
  double h1_median = 0.0; // median over seeds
  double eta = 0.0;       // B(6 ln m + 30)/sqrt(m)
};

struct approx_config {
  long steps = 20000;
  double lr0 = 1e-2;
  double lr1 = 0.0; // decay to zero sharpens the quadratic fit
  std::uint64_t seed = 1;
  int gauss_order = 48;
  std::size_t qmc_count = 131072;
};

// Least-squares H1 fit of the network to a finite cosine target, reported
// against the width-m approximation bound.
std::vector<approx_row> approximation_check(const cosine_series& target,
                                            const std::vector<int>& m_list,
                                            int seed_count, const approx_config& cfg);

} // namespace sgs
