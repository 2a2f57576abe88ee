#include "series.hpp"

#include <cmath>
#include <cstdlib>

#include "errors.hpp"

namespace sgs {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kMultiplyPrune = 1e-15;

void check_index(const cosine_series::index& k, int dim) {
  require(static_cast<int>(k.size()) == dim, errc::invalid_input,
          "multi-index length does not match series dimension");
  for (int ki : k)
    require(ki >= 0, errc::invalid_input, "multi-index entries must be nonnegative");
}

double basis_weight(const cosine_series::index& k) {
  double w = 1.0;
  for (int ki : k)
    if (ki > 0) w *= 0.5;
  return w;
}
} // namespace

cosine_series::cosine_series(int dim) : dim_(dim) {
  require(dim >= 1, errc::invalid_input, "series dimension must be >= 1");
}

cosine_series cosine_series::constant(int dim, double value) {
  cosine_series s(dim);
  s.set(index(dim, 0), value);
  return s;
}

void cosine_series::set(const index& k, double v) {
  check_index(k, dim_);
  if (v == 0.0)
    c_.erase(k);
  else
    c_[k] = v;
}

double cosine_series::get(const index& k) const {
  check_index(k, dim_);
  auto it = c_.find(k);
  return it == c_.end() ? 0.0 : it->second;
}

int cosine_series::max_frequency() const {
  int m = 0;
  for (const auto& [k, v] : c_)
    for (int ki : k)
      if (ki > m) m = ki;
  return m;
}

double cosine_series::evaluate(const double* x) const {
  double sum = 0.0;
  for (const auto& [k, v] : c_) {
    double t = v;
    for (int i = 0; i < dim_; ++i)
      if (k[i] != 0) t *= std::cos(kPi * k[i] * x[i]);
    sum += t;
  }
  return sum;
}

double cosine_series::evaluate(const std::vector<double>& x) const {
  require(static_cast<int>(x.size()) == dim_, errc::invalid_input,
          "point dimension does not match series dimension");
  return evaluate(x.data());
}

void cosine_series::gradient(const double* x, double* out) const {
  for (int i = 0; i < dim_; ++i) out[i] = 0.0;
  std::vector<double> cs(dim_), sn(dim_);
  for (const auto& [k, v] : c_) {
    for (int i = 0; i < dim_; ++i) {
      const double a = kPi * k[i] * x[i];
      cs[i] = k[i] == 0 ? 1.0 : std::cos(a);
      sn[i] = k[i] == 0 ? 0.0 : std::sin(a);
    }
    for (int i = 0; i < dim_; ++i) {
      if (k[i] == 0) continue;
      double t = -v * kPi * k[i] * sn[i];
      for (int j = 0; j < dim_; ++j)
        if (j != i) t *= cs[j];
      out[i] += t;
    }
  }
}

std::vector<double> cosine_series::gradient(const std::vector<double>& x) const {
  require(static_cast<int>(x.size()) == dim_, errc::invalid_input,
          "point dimension does not match series dimension");
  std::vector<double> g(dim_);
  gradient(x.data(), g.data());
  return g;
}

double inner_product(const cosine_series& a, const cosine_series& b) {
  require(a.dim() == b.dim(), errc::invalid_input, "series dimensions differ");
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  double sum = 0.0;
  for (const auto& [k, v] : small.coeffs()) {
    auto it = large.coeffs().find(k);
    if (it != large.coeffs().end()) sum += v * it->second * basis_weight(k);
  }
  return sum;
}

double grad_inner_product(const cosine_series& a, const cosine_series& b) {
  require(a.dim() == b.dim(), errc::invalid_input, "series dimensions differ");
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  double sum = 0.0;
  for (const auto& [k, v] : small.coeffs()) {
    auto it = large.coeffs().find(k);
    if (it == large.coeffs().end()) continue;
    double k2 = 0.0;
    for (int ki : k) k2 += static_cast<double>(ki) * ki;
    sum += v * it->second * kPi * kPi * k2 * basis_weight(k);
  }
  return sum;
}

cosine_series multiply(const cosine_series& a, const cosine_series& b) {
  require(a.dim() == b.dim(), errc::invalid_input, "series dimensions differ");
  const int d = a.dim();
  const double scale = std::ldexp(1.0, -d); // 1/2^d, one half per dimension
  cosine_series::coeff_map acc;
  cosine_series::index k(d);
  for (const auto& [ka, va] : a.coeffs()) {
    for (const auto& [kb, vb] : b.coeffs()) {
      const double v = va * vb * scale;
      // cos(ka)cos(kb) splits into indices |ka_i - kb_i| and ka_i + kb_i per dim.
      for (unsigned mask = 0; mask < (1u << d); ++mask) {
        for (int i = 0; i < d; ++i)
          k[i] = (mask >> i) & 1u ? ka[i] + kb[i] : std::abs(ka[i] - kb[i]);
        acc[k] += v;
      }
    }
  }
  cosine_series out(d);
  for (const auto& [kk, vv] : acc)
    if (std::abs(vv) >= kMultiplyPrune) out.set(kk, vv);
  return out;
}

cosine_series lin(const cosine_series& a, double ca, const cosine_series& b, double cb) {
  require(a.dim() == b.dim(), errc::invalid_input, "series dimensions differ");
  cosine_series out(a.dim());
  cosine_series::coeff_map acc;
  for (const auto& [k, v] : a.coeffs()) acc[k] += ca * v;
  for (const auto& [k, v] : b.coeffs()) acc[k] += cb * v;
  for (const auto& [k, v] : acc)
    if (v != 0.0) out.set(k, v);
  return out;
}

cosine_series scaled(const cosine_series& a, double c) {
  cosine_series out(a.dim());
  if (c == 0.0) return out;
  for (const auto& [k, v] : a.coeffs()) out.set(k, c * v);
  return out;
}

double barron_norm(const cosine_series& a, double s) {
  require(s >= 0.0, errc::invalid_input, "Barron norm order must be >= 0");
  double sum = 0.0;
  for (const auto& [k, v] : a.coeffs()) {
    long l1 = 0;
    for (int ki : k) l1 += ki;
    const double factor =
        l1 == 0 ? 1.0 : 1.0 + std::pow(kPi * static_cast<double>(l1), s);
    sum += factor * std::abs(v);
  }
  return sum;
}

} // namespace sgs
