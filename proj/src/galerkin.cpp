#include "galerkin.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"
#include "quadrature.hpp"

namespace sgs {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

// Lexicographic basis enumeration, last coordinate fastest.
struct basis_map {
  int dim, cutoff;
  std::size_t size;
  basis_map(int d, int K)
      : dim(d), cutoff(K), size(1) {
    for (int i = 0; i < d; ++i) size *= static_cast<std::size_t>(K + 1);
  }
  cosine_series::index unflatten(std::size_t f) const {
    cosine_series::index k(dim);
    for (int i = dim - 1; i >= 0; --i) {
      k[i] = static_cast<int>(f % (cutoff + 1));
      f /= (cutoff + 1);
    }
    return k;
  }
  // -1 when any entry exceeds the cutoff
  long flatten(const cosine_series::index& k) const {
    long f = 0;
    for (int i = 0; i < dim; ++i) {
      if (k[i] > cutoff) return -1;
      f = f * (cutoff + 1) + k[i];
    }
    return f;
  }
};

double basis_weight(const cosine_series::index& k) {
  double w = 1.0;
  for (int ki : k)
    if (ki > 0) w *= 0.5;
  return w;
}

double freq_sq(const cosine_series::index& k) {
  double s = 0.0;
  for (int ki : k) s += static_cast<double>(ki) * ki;
  return s;
}

cosine_series series_from_vector(const basis_map& bm, const Eigen::VectorXd& c) {
  cosine_series u(bm.dim);
  for (std::size_t f = 0; f < bm.size; ++f)
    if (c[static_cast<long>(f)] != 0.0) u.set(bm.unflatten(f), c[static_cast<long>(f)]);
  return u;
}

void check_grid_positive(const cosine_series& u, const std::string& label, errc code) {
  const std::size_t npts = 10000 * static_cast<std::size_t>(u.dim());
  const auto pts = halton_points(u.dim(), npts);
  for (std::size_t j = 0; j < npts; ++j)
    if (u.evaluate(pts.data() + j * u.dim()) <= 0.0)
      throw error(code, label + " is not strictly positive on the validation grid");
}
} // namespace

std::pair<double, double> potential_range(const cosine_series& V) {
  const std::size_t npts = 10000 * static_cast<std::size_t>(V.dim());
  const auto pts = halton_points(V.dim(), npts);
  double lo = V.evaluate(pts.data());
  double hi = lo;
  for (std::size_t j = 1; j < npts; ++j) {
    const double v = V.evaluate(pts.data() + j * V.dim());
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return {lo, hi};
}

void validate_potential(const cosine_series& V) {
  const auto [lo, hi] = potential_range(V);
  if (!(lo > 0.0) || !std::isfinite(hi))
    fail_assumption("potential must be strictly positive on the domain (grid min " +
                    std::to_string(lo) + ")");
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> assemble(const cosine_series& V,
                                                     const galerkin_config& cfg) {
  require(cfg.cutoff >= 1, errc::invalid_input, "Galerkin cutoff must be >= 1");
  validate_potential(V);
  const basis_map bm(V.dim(), cfg.cutoff);
  require(bm.size >= 2, errc::invalid_input, "Galerkin basis must have at least 2 functions");
  require(bm.size <= static_cast<std::size_t>(cfg.max_basis), errc::numeric,
          "Galerkin basis size exceeds the configured cap");

  const long n = static_cast<long>(bm.size);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd G(n);
  cosine_series phi(V.dim());
  for (long l = 0; l < n; ++l) {
    const auto kl = bm.unflatten(static_cast<std::size_t>(l));
    G[l] = basis_weight(kl);
    phi = cosine_series(V.dim());
    phi.set(kl, 1.0);
    const cosine_series VPhi = multiply(V, phi);
    for (const auto& [k, v] : VPhi.coeffs()) {
      const long f = bm.flatten(k);
      if (f >= 0) H(f, l) += v * basis_weight(k);
    }
    H(l, l) += kPi * kPi * freq_sq(kl) * G[l];
  }
  H = ((H + H.transpose()) * 0.5).eval();
  return {std::move(H), std::move(G)};
}

ground_truth solve_ground_truth(const cosine_series& V, const galerkin_config& cfg) {
  auto [H, G] = assemble(V, cfg);
  const basis_map bm(V.dim(), cfg.cutoff);
  const Eigen::VectorXd dinv = G.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd A = dinv.asDiagonal() * H * dinv.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  require(es.info() == Eigen::Success, errc::numeric, "dense eigensolver failed");

  ground_truth gt;
  gt.lambda0 = es.eigenvalues()[0];
  gt.lambda1 = es.eigenvalues()[1];
  gt.gap = gt.lambda1 - gt.lambda0;
  gt.cutoff = cfg.cutoff;
  if (!(gt.gap >= 1e-8 * std::max(1.0, std::abs(gt.lambda0))))
    fail_numeric("degenerate spectrum: gap " + std::to_string(gt.gap));

  Eigen::VectorXd c = dinv.asDiagonal() * es.eigenvectors().col(0);
  cosine_series::index zero(V.dim(), 0);
  const long f0 = bm.flatten(zero);
  if (c[f0] < 0.0) c = -c;
  gt.ustar = series_from_vector(bm, c);

  const auto [vlo, vhi] = potential_range(V);
  const double tol = 1e-6 * std::max(1.0, std::abs(gt.lambda0));
  if (gt.lambda0 < vlo - tol || gt.lambda0 > vhi + tol)
    fail_numeric("ground eigenvalue escapes the variational bracket [V_min, V_max]");
  check_grid_positive(gt.ustar, "computed ground state", errc::numeric);
  return gt;
}

cosine_series apply_inverse(const cosine_series& V, const cosine_series& f,
                            const galerkin_config& cfg) {
  require(f.dim() == V.dim(), errc::invalid_input, "dimension mismatch between V and f");
  require(f.max_frequency() <= cfg.cutoff, errc::invalid_input,
          "right-hand side has frequencies above the Galerkin cutoff");
  auto [H, G] = assemble(V, cfg);
  const basis_map bm(V.dim(), cfg.cutoff);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<long>(bm.size));
  for (const auto& [k, v] : f.coeffs()) rhs[bm.flatten(k)] = v * basis_weight(k);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
  require(ldlt.info() == Eigen::Success, errc::numeric, "stiffness factorization failed");
  const Eigen::VectorXd c = ldlt.solve(rhs);
  require(c.allFinite(), errc::numeric, "singular Galerkin system");
  return series_from_vector(bm, c);
}

eigenpair power_iterate(const cosine_series& V, const galerkin_config& cfg, double tol,
                        int max_iters) {
  require(tol > 0.0, errc::invalid_input, "power iteration tolerance must be > 0");
  require(max_iters >= 1, errc::invalid_input, "max_iters must be >= 1");
  auto [H, G] = assemble(V, cfg);
  const basis_map bm(V.dim(), cfg.cutoff);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
  require(ldlt.info() == Eigen::Success, errc::numeric, "stiffness factorization failed");

  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<long>(bm.size));
  c[bm.flatten(cosine_series::index(V.dim(), 0))] = 1.0; // start from u == 1
  auto rayleigh = [&](const Eigen::VectorXd& v) {
    return v.dot(H * v) / v.dot(G.asDiagonal() * v);
  };
  double lam_prev = rayleigh(c);
  for (int it = 1; it <= max_iters; ++it) {
    c = ldlt.solve(G.asDiagonal() * c);
    require(c.allFinite(), errc::numeric, "inverse iteration produced non-finite iterate");
    c /= std::sqrt(c.dot(G.asDiagonal() * c));
    const double lam = rayleigh(c);
    if (std::abs(lam - lam_prev) < tol) {
      if (c[bm.flatten(cosine_series::index(V.dim(), 0))] < 0.0) c = -c;
      eigenpair ep;
      ep.lambda = lam;
      ep.u = series_from_vector(bm, c);
      ep.iterations = it;
      check_grid_positive(ep.u, "power iteration limit", errc::numeric);
      return ep;
    }
    lam_prev = lam;
  }
  fail_numeric("power iteration did not converge in " + std::to_string(max_iters) +
               " iterations");
}

std::vector<std::pair<int, double>> barron_saturation(const cosine_series& V, double s,
                                                      const std::vector<int>& cutoffs) {
  require(s >= 0.0, errc::invalid_input, "Barron order must be >= 0");
  for (std::size_t i = 1; i < cutoffs.size(); ++i)
    require(cutoffs[i] > cutoffs[i - 1], errc::invalid_input,
            "cutoff list must be strictly increasing");
  std::vector<std::pair<int, double>> out;
  out.reserve(cutoffs.size());
  for (int K : cutoffs) {
    galerkin_config cfg;
    cfg.cutoff = K;
    const ground_truth gt = solve_ground_truth(V, cfg);
    out.emplace_back(K, barron_norm(gt.ustar, s + 2.0));
  }
  return out;
}

double exact_energy(const cosine_series& V, const cosine_series& u) {
  const double den = inner_product(u, u);
  require(den > 0.0, errc::numeric, "degenerate trial function");
  const double num = grad_inner_product(u, u) + inner_product(u, multiply(V, u));
  return num / den;
}

} // namespace sgs
