#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace sgs {

// Adam with bias correction; step() descends, so pass the negated gradient to
// ascend. Deterministic given the gradient sequence.
struct adam_state {
  Eigen::VectorXd m, v;
  long t = 0;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

  void reset(Eigen::Index size) {
    m = Eigen::VectorXd::Zero(size);
    v = Eigen::VectorXd::Zero(size);
    t = 0;
  }

  void step(Eigen::VectorXd& theta, const Eigen::VectorXd& grad, double lr) {
    ++t;
    m = beta1 * m + (1.0 - beta1) * grad;
    v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    theta.array() -=
        lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + eps);
  }
};

// Cosine schedule from lr0 (step 0) to lr1 (step total).
inline double cosine_lr(double lr0, double lr1, long step, long total) {
  if (total <= 0) return lr1;
  const double frac = static_cast<double>(step) / static_cast<double>(total);
  return lr1 + 0.5 * (lr0 - lr1) * (1.0 + std::cos(M_PI * frac));
}

} // namespace sgs
