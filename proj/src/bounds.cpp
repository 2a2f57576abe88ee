#include "bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "errors.hpp"
#include "estimators.hpp"
#include "network.hpp"
#include "optim.hpp"
#include "quadrature.hpp"
#include "rng.hpp"

namespace sgs {

double class_params::tau() const { return std::sqrt(static_cast<double>(std::max(m, 1))); }

namespace {

// B = 0 degenerates to the class holding only the zero function; the envelope
// and Lipschitz formulas are continuous there, so it stays admissible.
void check_params(const class_params& p) {
  require(p.B >= 0.0, errc::invalid_input, "budget B must be >= 0");
  require(p.m >= 0, errc::invalid_input, "width must be >= 0");
  require(p.d >= 1, errc::invalid_input, "dimension must be >= 1");
  require(p.v_max >= p.v_min, errc::invalid_input, "V_max must be >= V_min");
}

void check_params_positive(const class_params& p) {
  check_params(p);
  require(p.B > 0.0, errc::invalid_input, "budget B must be > 0");
}

} // namespace

envelope_set envelopes(const class_params& p) {
  check_params(p);
  envelope_set e;
  e.m_f = 16.0 * p.B;
  e.m_1 = e.m_f * e.m_f;
  e.m_2 = (1.0 + p.v_max) * e.m_1;
  return e;
}

std::pair<double, double> lambda_bounds(const class_params& p) {
  check_params(p);
  const double b = p.B;
  const double l1 = 36.0 * b * (5.0 + 8.0 * b);
  const double l2 = 64.0 * b * b * std::sqrt(static_cast<double>(std::max(p.m, 1))) +
                    8.0 * b + 36.0 * p.v_max * b * (5.0 + 8.0 * b);
  return {l1, l2};
}

double covering_log(double delta, double lambda, int m, int d, double B) {
  require(delta > 0.0, errc::invalid_input, "covering radius must be > 0");
  require(lambda > 0.0, errc::invalid_input, "Lipschitz constant must be > 0");
  require(B > 0.0, errc::invalid_input, "budget B must be > 0");
  require(m >= 1, errc::invalid_input, "width must be >= 1");
  require(d >= 1, errc::invalid_input, "dimension must be >= 1");
  const double md = static_cast<double>(m), dd = static_cast<double>(d);
  return std::log(4.0 * B * lambda / delta) + md * std::log(12.0 * B * lambda / delta) +
         (dd * md + md) * std::log(3.0 * lambda / delta);
}

namespace {

// 32-node Gauss-Legendre panel integrator on [a,b].
struct panel_rule {
  std::vector<double> x, w;
  panel_rule() { gauss_legendre_01(32, x, w); }
  template <class F>
  double integrate(double a, double b, F&& f) const {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) s += w[j] * f(a + (b - a) * x[j]);
    return (b - a) * s;
  }
};

} // namespace

double dudley_bound(double envelope, double lambda, int m, int d, double B, long n) {
  require(envelope > 0.0, errc::invalid_input, "envelope must be > 0");
  require(n >= 1, errc::invalid_input, "sample count must be >= 1");
  // argument validation shared with the entropy evaluations below
  covering_log(1.0, lambda, m, d, B);

  const auto entropy = [&](double eps) {
    return std::max(covering_log(eps, lambda, m, d, B), 0.0);
  };
  const panel_rule rule;

  // (0, min(1, M)]: substitute eps = e^{-t^2}; the integrand decays like
  // t*e^{-t^2}*sqrt(ln M), so unit panels truncate quickly.
  const double eps_hi = std::min(1.0, envelope);
  const double t_lo = eps_hi < 1.0 ? std::sqrt(-std::log(eps_hi)) : 0.0;
  const auto sub_integrand = [&](double t) {
    const double eps = std::exp(-t * t);
    return 2.0 * t * eps * std::sqrt(entropy(eps));
  };
  double integral = 0.0;
  for (int k = 0; k < 400; ++k) {
    const double part = rule.integrate(t_lo + k, t_lo + k + 1.0, sub_integrand);
    integral += part;
    if (k >= 1 && integral > 0.0 && part < 1e-12 * integral) break;
  }

  // [1, M]: the entropy is decreasing in eps, so integrate only up to its root.
  if (envelope > 1.0) {
    double hi = envelope;
    if (covering_log(envelope, lambda, m, d, B) <= 0.0) {
      if (covering_log(1.0, lambda, m, d, B) <= 0.0) {
        hi = 1.0;
      } else {
        double lo = 1.0, up = envelope;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + up);
          (covering_log(mid, lambda, m, d, B) > 0.0 ? lo : up) = mid;
        }
        hi = lo;
      }
    }
    if (hi > 1.0) {
      const long panels = static_cast<long>(std::ceil(hi - 1.0));
      const double h = (hi - 1.0) / static_cast<double>(panels);
      const auto direct = [&](double eps) { return std::sqrt(entropy(eps)); };
      for (long k = 0; k < panels; ++k)
        integral += rule.integrate(1.0 + k * h, 1.0 + (k + 1) * h, direct);
    }
  }

  require(std::isfinite(integral), errc::numeric, "entropy integral is not finite");
  return 12.0 / std::sqrt(static_cast<double>(n)) * integral;
}

xi_set xi_eta(const class_params& p, long n, double delta, double r1, double r2) {
  check_params_positive(p);
  require(n >= 1, errc::invalid_input, "sample count must be >= 1");
  require(delta > 0.0 && delta < 1.0 / 3.0, errc::invalid_input,
          "confidence level must lie in (0, 1/3)");
  require(r1 >= 0.0 && r2 >= 0.0, errc::invalid_input,
          "Rademacher complexities must be >= 0");
  const envelope_set env = envelopes(p);
  const double nd = static_cast<double>(n);
  xi_set x;
  x.xi1 = 2.0 * r1 + 4.0 * env.m_1 * std::sqrt(2.0 * std::log(4.0 / delta) / nd);
  x.xi2 = 2.0 * r2 + 4.0 * env.m_2 * std::sqrt(2.0 * std::log(4.0 / delta) / nd);
  x.xi3 = env.m_1 * std::sqrt(std::log(2.0 / delta) / (2.0 * nd));
  x.eta = eta_bound(p.B, p.m);
  return x;
}

double eta_bound(double B, int m) {
  require(B >= 0.0, errc::invalid_input, "budget B must be >= 0");
  require(m >= 1, errc::invalid_input, "width must be >= 1");
  const double md = static_cast<double>(m);
  return B * (6.0 * std::log(md) + 30.0) / std::sqrt(md);
}

bound_value oracle_rhs(double xi1, double xi2, double xi3, double m2, double approx_gap) {
  bound_value r;
  r.feasible = xi1 < 1.0 && xi3 < 1.0;
  if (!r.feasible) {
    r.value = std::numeric_limits<double>::infinity();
    return r;
  }
  r.value = (m2 * xi1 + xi2) / (1.0 - xi1) + (m2 * xi3 + xi2) / (1.0 - xi3) + approx_gap;
  return r;
}

bound_value energy_diff_bound(double lambda_star, double v_min, double v_max, double eta) {
  require(eta >= 0.0, errc::invalid_input, "eta must be >= 0");
  require(lambda_star > 0.0, errc::invalid_input, "ground energy must be > 0");
  require(v_max >= v_min, errc::invalid_input, "V_max must be >= V_min");
  require(v_min > 0.0, errc::assumption, "potential must be strictly positive");
  bound_value r;
  r.feasible = eta <= 0.5;
  r.value = (2.0 * (1.0 + v_max) * (std::sqrt(lambda_star / std::min(1.0, v_min)) + 1.0) +
             3.0 * lambda_star) *
            eta;
  if (!r.feasible) r.value = std::numeric_limits<double>::infinity();
  return r;
}

stability_report stability_check(double excess, double p_perp_l2, double p_perp_h1,
                                 const ground_truth& truth, double v_min, double v_max,
                                 double l2_norm_of_u) {
  require(truth.gap > 0.0, errc::assumption, "spectral gap must be > 0");
  require(l2_norm_of_u > 0.0, errc::invalid_input, "L2 norm must be > 0");
  require(std::isfinite(excess) && std::isfinite(p_perp_l2) && std::isfinite(p_perp_h1),
          errc::invalid_input, "stability inputs must be finite");
  require(v_max >= v_min, errc::invalid_input, "V_max must be >= V_min");
  stability_report r;
  const double mass = l2_norm_of_u * l2_norm_of_u;
  r.l2_lhs = p_perp_l2 * p_perp_l2 * mass;
  r.l2_rhs = excess / truth.gap * mass;
  r.l2_slack = r.l2_rhs - r.l2_lhs;
  r.l2_violation = r.l2_slack < -1e-8 * std::max(1.0, r.l2_rhs);
  r.h1_lhs = p_perp_h1 * p_perp_h1;
  r.h1_rhs = ((v_max - v_min + 1.0) / truth.gap + 1.0) * excess;
  r.h1_slack = r.h1_rhs - r.h1_lhs;
  r.h1_violation = r.h1_slack < -1e-8 * std::max(1.0, r.h1_rhs);
  return r;
}

stability_trials_result stability_trials(const cosine_series& V, int cutoff, long trials,
                                         std::uint64_t seed, double v_min, double v_max) {
  require(trials >= 1, errc::invalid_input, "trial count must be >= 1");
  galerkin_config cfg;
  cfg.cutoff = cutoff;
  const ground_truth truth = solve_ground_truth(V, cfg);
  const int d = V.dim();
  long total = 1;
  for (int i = 0; i < d; ++i) total *= cutoff + 1;

  rng_stream rs(seed, stream::optimizer);
  stability_trials_result out;
  out.trials = trials;
  out.min_l2_slack = std::numeric_limits<double>::infinity();
  out.min_h1_slack = std::numeric_limits<double>::infinity();

  std::vector<int> k(d);
  for (long t = 0; t < trials; ++t) {
    cosine_series u(d);
    for (long idx = 0; idx < total; ++idx) {
      long rem = idx;
      for (int i = d - 1; i >= 0; --i) {
        k[i] = static_cast<int>(rem % (cutoff + 1));
        rem /= cutoff + 1;
      }
      u.set(k, 2.0 * rs.uniform(static_cast<std::uint64_t>(t) * total + idx) - 1.0);
    }
    const double mass = inner_product(u, u);
    require(mass > 0.0, errc::numeric, "degenerate trial function");
    u = scaled(u, 1.0 / std::sqrt(mass));

    const double excess = exact_energy(V, u) - truth.lambda0;
    const double alpha = inner_product(u, truth.ustar);
    const double p2 = std::max(0.0, 1.0 - alpha * alpha);
    const cosine_series diff = lin(u, 1.0, truth.ustar, -alpha);
    const double ph1 = std::sqrt(p2 + grad_inner_product(diff, diff));

    const stability_report rep =
        stability_check(excess, std::sqrt(p2), ph1, truth, v_min, v_max, 1.0);
    out.l2_violations += rep.l2_violation ? 1 : 0;
    out.h1_violations += rep.h1_violation ? 1 : 0;
    out.min_l2_slack = std::min(out.min_l2_slack, rep.l2_slack);
    out.min_h1_slack = std::min(out.min_h1_slack, rep.h1_slack);
  }
  return out;
}

double rademacher_estimate(g_class cls, const class_params& p, const cosine_series& V,
                           long n, const rademacher_config& rc) {
  check_params_positive(p);
  require(n >= 1, errc::invalid_input, "sample count must be >= 1");
  require(rc.n_sigma >= 8, errc::invalid_input, "need at least 8 sign vectors");
  require(rc.n_restarts >= 4, errc::invalid_input, "need at least 4 restarts");
  require(rc.steps >= 1, errc::invalid_input, "step count must be >= 1");
  require(V.dim() == p.d, errc::invalid_input, "potential dimension mismatch");

  const sample_set S = sample(p.d, n, rc.seed);
  Eigen::VectorXd Vx;
  if (cls == g_class::integrand) Vx = eval_series_values(V, S.X);

  rng_stream sig(rc.seed, stream::rademacher);
  rng_stream sub(rc.seed, stream::optimizer);
  const double nd = static_cast<double>(n);

  net_workspace ws;
  Eigen::VectorXd u(n), a(n), sigma(n);
  Eigen::MatrixXd gradu(n, p.d);
  const Eigen::MatrixXd bzero = Eigen::MatrixXd::Zero(n, p.d);
  Eigen::MatrixXd bmat;

  double total = 0.0;
  for (int s = 0; s < rc.n_sigma; ++s) {
    for (long j = 0; j < n; ++j)
      sigma[j] = (sig.bits(static_cast<std::uint64_t>(s) * n + j) & 1u) ? 1.0 : -1.0;

    double best = 0.0;
    for (int r = 0; r < rc.n_restarts; ++r) {
      two_layer_net net;
      if (p.m >= 1) {
        net = net_init(p.d, p.m, p.B,
                       sub.bits(static_cast<std::uint64_t>(s) * rc.n_restarts + r));
      } else {
        net.d = p.d;
        net.B = p.B;
        net.c = std::min(1.0, 2.0 * p.B);
        net.gamma = Eigen::VectorXd(0);
        net.w = Eigen::MatrixXd(0, p.d);
        net.t = Eigen::VectorXd(0);
        net.reinit_seed = sub.bits(static_cast<std::uint64_t>(s) * rc.n_restarts + r);
        project(net);
      }
      Eigen::VectorXd theta = pack_params(net);
      adam_state opt;
      opt.reset(theta.size());

      for (long step = 0;; ++step) {
        net_forward(net, S.X, ws, u, gradu);
        double f = 0.0;
        switch (cls) {
          case g_class::plain: f = sigma.dot(u) / nd; break;
          case g_class::squared: f = sigma.dot(u.cwiseProduct(u)) / nd; break;
          case g_class::integrand:
            f = sigma.dot((gradu.rowwise().squaredNorm().array() +
                           Vx.array() * u.array().square())
                              .matrix()) /
                nd;
            break;
        }
        best = std::max(best, std::abs(f));
        if (step == rc.steps) break;

        const double sgn = f >= 0.0 ? 1.0 : -1.0;
        switch (cls) {
          case g_class::plain:
            a = (sgn / nd) * sigma;
            bmat = bzero;
            break;
          case g_class::squared:
            a = (2.0 * sgn / nd) * sigma.cwiseProduct(u);
            bmat = bzero;
            break;
          case g_class::integrand:
            a = (2.0 * sgn / nd) * sigma.cwiseProduct(Vx).cwiseProduct(u);
            bmat = (2.0 * sgn / nd) * sigma.asDiagonal() * gradu;
            break;
        }
        const param_gradient g = net_weighted_gradient(net, S.X, ws, a, bmat);
        const Eigen::VectorXd ascent = -pack_gradient(g);
        opt.step(theta, ascent, cosine_lr(rc.lr0, rc.lr1, step, rc.steps));
        unpack_params(theta, net);
        project(net);
        theta = pack_params(net);
      }
    }
    total += best;
  }
  return total / static_cast<double>(rc.n_sigma);
}

bounds_report make_bounds_report(const class_params& p, long n, double delta,
                                 double approx_gap, const cosine_series* V,
                                 const rademacher_config& rc) {
  require(p.m >= 1, errc::invalid_input, "width must be >= 1");
  bounds_report rep;
  rep.params = p;
  rep.n = n;
  rep.delta = delta;
  rep.approx_gap = approx_gap;
  rep.env = envelopes(p);
  std::tie(rep.lambda1, rep.lambda2) = lambda_bounds(p);
  rep.rademacher_bound_1 = dudley_bound(rep.env.m_1, rep.lambda1, p.m, p.d, p.B, n);
  rep.rademacher_bound_2 = dudley_bound(rep.env.m_2, rep.lambda2, p.m, p.d, p.B, n);
  rep.xi = xi_eta(p, n, delta, rep.rademacher_bound_1, rep.rademacher_bound_2);
  rep.oracle = oracle_rhs(rep.xi.xi1, rep.xi.xi2, rep.xi.xi3, rep.env.m_2, approx_gap);
  if (V != nullptr) {
    rep.rademacher_empirical_1 = rademacher_estimate(g_class::squared, p, *V, n, rc);
    rep.rademacher_empirical_2 = rademacher_estimate(g_class::integrand, p, *V, n, rc);
  }
  return rep;
}

} // namespace sgs
