#include "quadrature.hpp"

#include <cmath>

#include "errors.hpp"

namespace sgs {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr int kHaltonPrimes[] = {2, 3, 5, 7, 11, 13};

double radical_inverse(std::size_t i, int base) {
  double f = 1.0, r = 0.0;
  for (std::size_t n = i + 1; n > 0; n /= base) {
    f /= base;
    r += f * static_cast<double>(n % base);
  }
  return r;
}
} // namespace

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  require(n >= 1, errc::invalid_input, "quadrature order must be >= 1");
  nodes.resize(n);
  weights.resize(n);
  // Newton iteration on P_n over [-1,1], then affine map to [0,1].
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = 0.5 * (1.0 - x); // descending x maps to ascending node
    nodes[n - 1 - i] = 0.5 * (1.0 + x);
    weights[i] = 0.5 * w;
    weights[n - 1 - i] = 0.5 * w;
  }
  if (n % 2 == 1) { // center point, exact
    nodes[n / 2] = 0.5;
  }
}

quad_rule tensor_gauss(int dim, int order) {
  require(dim >= 1, errc::invalid_input, "quadrature dimension must be >= 1");
  std::vector<double> x1, w1;
  gauss_legendre_01(order, x1, w1);
  std::size_t total = 1;
  for (int i = 0; i < dim; ++i) total *= static_cast<std::size_t>(order);
  require(total <= 20000000, errc::numeric, "tensor quadrature grid too large");
  quad_rule r;
  r.dim = dim;
  r.nodes.resize(total * dim);
  r.weights.assign(total, 1.0);
  std::vector<int> idx(dim, 0);
  for (std::size_t j = 0; j < total; ++j) {
    double w = 1.0;
    for (int i = 0; i < dim; ++i) {
      r.nodes[j * dim + i] = x1[idx[i]];
      w *= w1[idx[i]];
    }
    r.weights[j] = w;
    for (int i = 0; i < dim; ++i) {
      if (++idx[i] < order) break;
      idx[i] = 0;
    }
  }
  return r;
}

std::vector<double> halton_points(int dim, std::size_t count) {
  require(dim >= 1 && dim <= 6, errc::invalid_input, "Halton points support 1 <= d <= 6");
  std::vector<double> pts(count * dim);
  for (std::size_t j = 0; j < count; ++j)
    for (int i = 0; i < dim; ++i)
      pts[j * dim + i] = radical_inverse(j, kHaltonPrimes[i]);
  return pts;
}

quad_rule halton_rule(int dim, std::size_t count) {
  require(count >= 1, errc::invalid_input, "quadrature point count must be >= 1");
  quad_rule r;
  r.dim = dim;
  r.nodes = halton_points(dim, count);
  r.weights.assign(count, 1.0 / static_cast<double>(count));
  return r;
}

quad_rule default_rule(int dim, int gauss_order, std::size_t qmc_count) {
  if (dim <= 3) return tensor_gauss(dim, gauss_order);
  return halton_rule(dim, qmc_count);
}

} // namespace sgs
