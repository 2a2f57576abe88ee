#include "estimators.hpp"

#include <cmath>

#include "errors.hpp"
#include "rng.hpp"

namespace sgs {

namespace {
constexpr long kNetBlock = 8192; // bounds the n x m workspace footprint

Eigen::MatrixXd rule_matrix(const quad_rule& rule) {
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                        Eigen::RowMajor>>(
      rule.nodes.data(), static_cast<long>(rule.count()), rule.dim);
}
} // namespace

sample_set sample(int dim, long n, std::uint64_t seed) {
  require(dim >= 1, errc::invalid_input, "sample dimension must be >= 1");
  require(n >= 1, errc::invalid_input, "sample count must be >= 1");
  sample_set S;
  S.dim = dim;
  S.n = n;
  S.seed = seed;
  S.X.resize(n, dim);
  const rng_stream rs(seed, stream::sampling);
  for (long j = 0; j < n; ++j)
    for (int i = 0; i < dim; ++i)
      S.X(j, i) = rs.uniform(static_cast<std::uint64_t>(j) * dim + i);
  return S;
}

void series_field::eval(const Eigen::MatrixXd& X, Eigen::VectorXd& u,
                        Eigen::MatrixXd& gradu) const {
  const long n = X.rows();
  const int d = s_->dim();
  require(X.cols() == d, errc::invalid_input, "sample dimension mismatch");
  u.resize(n);
  gradu.resize(n, d);
  Eigen::VectorXd x(d), g(d);
  for (long j = 0; j < n; ++j) {
    x = X.row(j).transpose();
    u[j] = s_->evaluate(x.data());
    s_->gradient(x.data(), g.data());
    gradu.row(j) = g.transpose();
  }
}

void net_field::eval(const Eigen::MatrixXd& X, Eigen::VectorXd& u,
                     Eigen::MatrixXd& gradu) const {
  const long n = X.rows();
  u.resize(n);
  gradu.resize(n, n_->d);
  net_workspace ws;
  Eigen::VectorXd ub;
  Eigen::MatrixXd gb;
  for (long start = 0; start < n; start += kNetBlock) {
    const long len = std::min(kNetBlock, n - start);
    const Eigen::MatrixXd Xb = X.middleRows(start, len);
    net_forward(*n_, Xb, ws, ub, gb);
    u.segment(start, len) = ub;
    gradu.middleRows(start, len) = gb;
  }
}

Eigen::VectorXd eval_series_values(const cosine_series& s, const Eigen::MatrixXd& X) {
  require(X.cols() == s.dim(), errc::invalid_input, "sample dimension mismatch");
  const long n = X.rows();
  Eigen::VectorXd v(n);
  Eigen::VectorXd x(s.dim());
  for (long j = 0; j < n; ++j) {
    x = X.row(j).transpose();
    v[j] = s.evaluate(x.data());
  }
  return v;
}

namespace {
losses weighted_losses(const scalar_field& u, const cosine_series& V,
                       const Eigen::MatrixXd& X, const Eigen::VectorXd* weights) {
  require(u.dim() == V.dim(), errc::invalid_input, "field and potential dimensions differ");
  Eigen::VectorXd uv;
  Eigen::MatrixXd gv;
  u.eval(X, uv, gv);
  const Eigen::VectorXd Vx = eval_series_values(V, X);
  const Eigen::ArrayXd quad =
      gv.array().square().rowwise().sum() + Vx.array() * uv.array().square();
  const Eigen::ArrayXd mass = uv.array().square();
  losses L;
  if (weights) {
    L.e_v = (quad * weights->array()).sum();
    L.e_2 = (mass * weights->array()).sum();
  } else {
    L.e_v = quad.mean();
    L.e_2 = mass.mean();
  }
  require(L.e_2 > 0.0 && std::isfinite(L.e_2), errc::numeric,
          "degenerate trial function: L2 mass vanished");
  L.e = L.e_v / L.e_2;
  return L;
}
} // namespace

losses empirical_losses(const scalar_field& u, const cosine_series& V,
                        const sample_set& S) {
  return weighted_losses(u, V, S.X, nullptr);
}

losses population_losses(const scalar_field& u, const cosine_series& V,
                         const quad_rule& rule) {
  const Eigen::MatrixXd X = rule_matrix(rule);
  const Eigen::VectorXd w =
      Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), static_cast<long>(rule.count()));
  return weighted_losses(u, V, X, &w);
}

eval_report error_metrics(const scalar_field& u, const cosine_series& V,
                          const ground_truth& truth, const quad_rule& rule) {
  require(u.dim() == truth.ustar.dim(), errc::invalid_input,
          "field and reference dimensions differ");
  const Eigen::MatrixXd X = rule_matrix(rule);
  const Eigen::VectorXd w =
      Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), static_cast<long>(rule.count()));

  Eigen::VectorXd uv;
  Eigen::MatrixXd gv;
  u.eval(X, uv, gv);
  Eigen::VectorXd sv;
  Eigen::MatrixXd sg;
  series_field(truth.ustar).eval(X, sv, sg);
  const Eigen::VectorXd Vx = eval_series_values(V, X);

  eval_report r;
  r.e_v = ((gv.array().square().rowwise().sum() + Vx.array() * uv.array().square()) *
           w.array())
              .sum();
  r.e_2 = (uv.array().square() * w.array()).sum();
  require(r.e_2 > 0.0 && std::isfinite(r.e_2), errc::numeric,
          "degenerate trial function: L2 mass vanished");
  r.energy = r.e_v / r.e_2;
  const double grad_sq = (gv.array().square().rowwise().sum() * w.array()).sum();
  r.l2_norm = std::sqrt(r.e_2);
  r.h1_norm = std::sqrt(r.e_2 + grad_sq);
  r.overlap = (uv.array() * sv.array() * w.array()).sum() / r.l2_norm;
  const double p2 = std::max(0.0, 1.0 - r.overlap * r.overlap);
  r.p_perp_l2 = std::sqrt(p2);
  const double semi =
      ((gv / r.l2_norm - r.overlap * sg).array().square().rowwise().sum() * w.array())
          .sum();
  r.p_perp_h1 = std::sqrt(p2 + semi);
  return r;
}

} // namespace sgs
