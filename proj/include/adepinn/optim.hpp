#pragma once

#include <Eigen/Core>

namespace adepinn {

/// Adam moments for a flat parameter vector.
struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  long step_count = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  AdamState() = default;
  explicit AdamState(Eigen::Index n) : m(Eigen::VectorXd::Zero(n)), v(Eigen::VectorXd::Zero(n)) {}
};

/**
 * One bias-corrected Adam update. Entries where `mask` is 0 are left
 * untouched (moments included). Throws NonFinite on a non-finite gradient
 * or update, leaving both state and parameters unchanged.
 */
void adam_step(AdamState& state, Eigen::Ref<Eigen::VectorXd> params, const Eigen::VectorXd& grad, double lr,
               const Eigen::VectorXd* mask = nullptr);

}  // namespace adepinn
