#pragma once

#include <map>
#include <vector>

namespace sgs {

// Finite cosine expansion u(x) = sum_k c(k) * prod_i cos(pi k_i x_i) on [0,1]^d,
// keyed by multi-indices k with nonnegative entries. The basis is L2-orthogonal
// with weights w(0)=1, w(j)=1/2 for j>=1, so inner products and H1 seminorms are
// exact finite sums. Stored coefficients are nonzero (exact zeros are dropped).
class cosine_series {
public:
  using index = std::vector<int>;
  using coeff_map = std::map<index, double>;

  explicit cosine_series(int dim);
  static cosine_series constant(int dim, double value);

  int dim() const { return dim_; }
  std::size_t size() const { return c_.size(); }
  const coeff_map& coeffs() const { return c_; }

  void set(const index& k, double v); // v = 0 erases
  double get(const index& k) const;
  int max_frequency() const; // max over stored k of |k|_inf; 0 for empty

  double evaluate(const double* x) const;
  double evaluate(const std::vector<double>& x) const;
  void gradient(const double* x, double* out) const;
  std::vector<double> gradient(const std::vector<double>& x) const;

private:
  int dim_;
  coeff_map c_;
};

// Exact L2(Omega) inner product via orthogonality.
double inner_product(const cosine_series& a, const cosine_series& b);
// Exact <grad a, grad b> = sum_k a_k b_k pi^2 |k|_2^2 prod_i w(k_i).
double grad_inner_product(const cosine_series& a, const cosine_series& b);
// Exact product series via cos(A)cos(B) = cos(A-B)/2 + cos(A+B)/2 per dimension;
// coefficients below 1e-15 in magnitude are pruned to bound fill-in.
cosine_series multiply(const cosine_series& a, const cosine_series& b);
// ca*a + cb*b with exact-zero pruning.
cosine_series lin(const cosine_series& a, double ca, const cosine_series& b, double cb);
cosine_series scaled(const cosine_series& a, double c);
// Spectral Barron norm of order s >= 0: sum_k (1 + pi^s |k|_1^s) |c(k)|,
// where the |k|_1 = 0 term contributes |c(0)| alone for every s.
double barron_norm(const cosine_series& a, double s);

inline double l2_norm_sq(const cosine_series& a) { return inner_product(a, a); }
inline double h1_norm_sq(const cosine_series& a) {
  return inner_product(a, a) + grad_inner_product(a, a);
}

} // namespace sgs
