#include "trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "bounds.hpp"
#include "errors.hpp"
#include "optim.hpp"
#include "quadrature.hpp"

namespace sgs {

namespace {

void check_config(long n, long steps, double lr0, double lr1, int gauss_order,
                  std::size_t qmc_count) {
  require(n >= 1, errc::invalid_input, "sample count must be >= 1");
  require(steps >= 1, errc::invalid_input, "step count must be >= 1");
  require(lr0 > 0.0 && lr1 >= 0.0, errc::invalid_input, "learning rates must be positive");
  require(gauss_order >= 1, errc::invalid_input, "quadrature order must be >= 1");
  require(qmc_count >= 1, errc::invalid_input, "quadrature count must be >= 1");
}

int width_for(long n) {
  return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size();
  return 0.5 * (v[(k - 1) / 2] + v[k / 2]);
}

} // namespace

train_result train(const cosine_series& V, const train_config& cfg,
                   const ground_truth* truth) {
  const auto t0 = std::chrono::steady_clock::now();
  check_config(cfg.n, cfg.steps, cfg.lr0, cfg.lr1, cfg.gauss_order, cfg.qmc_count);

  train_config rc = cfg;
  if (rc.m == 0) rc.m = width_for(rc.n);
  require(rc.m >= 1, errc::invalid_input, "width must be >= 1");
  require(rc.n >= rc.m, errc::invalid_input, "need n >= m");
  if (rc.B == 0.0) {
    require(truth != nullptr, errc::invalid_input,
            "budget B unresolved: pass B or a reference solution");
    rc.B = barron_norm(truth->ustar, 2.0);
  }
  require(rc.B > 0.0, errc::invalid_input, "budget B must be > 0");

  const auto [vlo, vhi] = potential_range(V);
  require(vlo > 0.0, errc::assumption, "potential must be strictly positive");
  require(std::isfinite(vhi), errc::assumption, "potential must be bounded");
  const double guard = 10.0 * vhi;

  const int d = V.dim();
  const sample_set S = sample(d, rc.n, rc.seed);
  const Eigen::VectorXd Vx = eval_series_values(V, S.X);

  two_layer_net net = net_init(d, rc.m, rc.B, rc.seed);
  two_layer_net best = net;
  double best_loss = std::numeric_limits<double>::infinity();

  net_workspace ws;
  Eigen::VectorXd u;
  Eigen::MatrixXd gradu;
  adam_state opt;
  Eigen::VectorXd theta = pack_params(net);
  opt.reset(theta.size());

  train_result res;
  res.trace.reserve(static_cast<std::size_t>(rc.steps) + 1);
  int consecutive_high = 0;

  for (long step = 0;; ++step) {
    double e_nv = 0.0, e_n2 = 0.0, e_n = 0.0;
    const param_gradient g =
        param_gradient_rayleigh(net, S.X, Vx, ws, u, gradu, &e_nv, &e_n2, &e_n);
    require(std::isfinite(e_n), errc::numeric, "empirical energy is not finite");
    res.trace.push_back(e_n);
    if (e_n < best_loss) {
      best_loss = e_n;
      best = net;
    }
    if (e_n > guard) {
      require(++consecutive_high < 100, errc::numeric,
              "optimizer diverged: energy above 10*V_max for 100 consecutive steps");
    } else {
      consecutive_high = 0;
    }
    if (step == rc.steps) break;

    const double lr = cosine_lr(rc.lr0, rc.lr1, step, rc.steps);
    if (rc.adam) {
      opt.step(theta, pack_gradient(g), lr);
      unpack_params(theta, net);
    } else {
      net.c -= lr * g.c;
      net.gamma -= lr * g.gamma;
      net.w -= lr * g.w;
      net.t -= lr * g.t;
    }
    project(net);
    if (rc.adam) theta = pack_params(net);
  }

  res.net = best;
  res.e_n = best_loss;
  res.cfg = rc;

  const quad_rule rule = default_rule(d, rc.gauss_order, rc.qmc_count);
  const net_field field(res.net);
  if (truth != nullptr) {
    res.report = error_metrics(field, V, *truth, rule);
    res.has_report = true;
    res.pop_energy = res.report.energy;
    res.excess = res.pop_energy - truth->lambda0;
  } else {
    res.pop_energy = population_losses(field, V, rule).e;
  }
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

sweep_result sweep(const cosine_series& V, const std::vector<long>& n_list,
                   int seed_count, const train_config& tpl, int cutoff, double delta) {
  require(n_list.size() >= 3, errc::invalid_input, "need at least 3 sample sizes");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    require(n_list[i] > n_list[i - 1], errc::invalid_input,
            "sample sizes must be strictly increasing");
  require(seed_count >= 5, errc::invalid_input, "need at least 5 seeds");

  galerkin_config gcfg;
  gcfg.cutoff = cutoff;
  sweep_result out;
  out.truth = solve_ground_truth(V, gcfg);
  out.B = tpl.B > 0.0 ? tpl.B : barron_norm(out.truth.ustar, 2.0);
  out.delta = delta;
  const auto [vlo, vhi] = potential_range(V);

  for (const long n : n_list) {
    const int m = width_for(n);
    std::vector<double> excesses;
    excesses.reserve(seed_count);
    for (int s = 0; s < seed_count; ++s) {
      train_config cfg = tpl;
      cfg.n = n;
      cfg.m = m;
      cfg.B = out.B;
      cfg.seed = tpl.seed + static_cast<std::uint64_t>(s);
      const train_result tr = train(V, cfg, &out.truth);
      sweep_row row;
      row.seed = cfg.seed;
      row.n = n;
      row.m = m;
      row.energy = tr.pop_energy;
      row.excess = tr.excess;
      row.p_perp_l2 = tr.report.p_perp_l2;
      row.p_perp_h1 = tr.report.p_perp_h1;
      out.rows.push_back(row);
      excesses.push_back(tr.excess);
    }

    sweep_cell cell;
    cell.n = n;
    cell.m = m;
    cell.median_excess = median_of(excesses);

    class_params p;
    p.B = out.B;
    p.m = m;
    p.d = V.dim();
    p.v_min = vlo;
    p.v_max = vhi;
    const envelope_set env = envelopes(p);
    const auto [l1, l2] = lambda_bounds(p);
    const double r1 = dudley_bound(env.m_1, l1, m, p.d, p.B, n);
    const double r2 = dudley_bound(env.m_2, l2, m, p.d, p.B, n);
    const xi_set xi = xi_eta(p, n, delta, r1, r2);
    const bound_value oracle = oracle_rhs(xi.xi1, xi.xi2, xi.xi3, env.m_2, 0.0);
    cell.bound_feasible = oracle.feasible;
    cell.bound_value = oracle.value;
    cell.bound_holds = oracle.feasible && cell.median_excess <= oracle.value;
    out.cells.push_back(cell);
  }

  // log-log slope over cells whose median excess clears the 1e-8 floor
  std::vector<double> xs, ys;
  for (const sweep_cell& c : out.cells) {
    if (c.median_excess >= 1e-8) {
      xs.push_back(std::log(static_cast<double>(c.n)));
      ys.push_back(std::log(c.median_excess));
    }
  }
  if (xs.size() >= 2) {
    const double xbar = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    const double ybar = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      num += (xs[i] - xbar) * (ys[i] - ybar);
      den += (xs[i] - xbar) * (xs[i] - xbar);
    }
    out.slope = num / den;
    out.slope_applicable = true;
  } else {
    out.slope = std::numeric_limits<double>::quiet_NaN();
    out.slope_applicable = false;
  }
  return out;
}

std::vector<approx_row> approximation_check(const cosine_series& target,
                                            const std::vector<int>& m_list,
                                            int seed_count, const approx_config& cfg) {
  require(!m_list.empty(), errc::invalid_input, "need at least one width");
  for (const int m : m_list) require(m >= 1, errc::invalid_input, "width must be >= 1");
  require(seed_count >= 1, errc::invalid_input, "need at least one seed");
  check_config(1, cfg.steps, cfg.lr0, std::max(cfg.lr1, 0.0), cfg.gauss_order,
               cfg.qmc_count);

  const int d = target.dim();
  const double B = barron_norm(target, 2.0);
  require(B > 0.0, errc::invalid_input, "target has zero Barron norm");

  const quad_rule rule = default_rule(d, cfg.gauss_order, cfg.qmc_count);
  const long q = static_cast<long>(rule.count());
  Eigen::MatrixXd X(q, d);
  Eigen::VectorXd rho(q), f(q);
  Eigen::MatrixXd gradf(q, d);
  std::vector<double> gbuf(d);
  for (long j = 0; j < q; ++j) {
    const double* pt = rule.point(j);
    for (int i = 0; i < d; ++i) X(j, i) = pt[i];
    rho[j] = rule.weights[j];
    f[j] = target.evaluate(pt);
    target.gradient(pt, gbuf.data());
    for (int i = 0; i < d; ++i) gradf(j, i) = gbuf[i];
  }

  std::vector<approx_row> table;
  net_workspace ws;
  Eigen::VectorXd u(q), a(q);
  Eigen::MatrixXd gradu(q, d), bmat(q, d);

  for (const int m : m_list) {
    std::vector<double> errors;
    errors.reserve(seed_count);
    for (int s = 0; s < seed_count; ++s) {
      two_layer_net net =
          net_init(d, m, B, cfg.seed + static_cast<std::uint64_t>(s));
      adam_state opt;
      Eigen::VectorXd theta = pack_params(net);
      opt.reset(theta.size());
      double best_j = std::numeric_limits<double>::infinity();

      for (long step = 0;; ++step) {
        net_forward(net, X, ws, u, gradu);
        const Eigen::VectorXd du = u - f;
        const Eigen::MatrixXd dg = gradu - gradf;
        const double j_val = rho.dot(du.cwiseProduct(du)) +
                             rho.dot(dg.rowwise().squaredNorm());
        require(std::isfinite(j_val), errc::numeric, "fit objective is not finite");
        best_j = std::min(best_j, j_val);
        if (step == cfg.steps) break;

        a = 2.0 * rho.cwiseProduct(du);
        bmat = 2.0 * rho.asDiagonal() * dg;
        const param_gradient g = net_weighted_gradient(net, X, ws, a, bmat);
        opt.step(theta, pack_gradient(g), cosine_lr(cfg.lr0, cfg.lr1, step, cfg.steps));
        unpack_params(theta, net);
        project(net);
        theta = pack_params(net);
      }
      errors.push_back(std::sqrt(best_j));
    }
    approx_row row;
    row.m = m;
    row.h1_best = *std::min_element(errors.begin(), errors.end());
    row.h1_median = median_of(errors);
    row.eta = eta_bound(B, m);
    table.push_back(row);
  }
  return table;
}

} // namespace sgs
