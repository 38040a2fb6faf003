#include "adepinn/optim.hpp"

#include <cmath>

#include "adepinn/error.hpp"

namespace adepinn {

void adam_step(AdamState& state, Eigen::Ref<Eigen::VectorXd> params, const Eigen::VectorXd& grad, double lr,
               const Eigen::VectorXd* mask) {
  const Eigen::Index n = params.size();
  if (grad.size() != n || state.m.size() != n || state.v.size() != n || (mask && mask->size() != n)) {
    throw Error(ErrorKind::shape_mismatch, "Adam state, gradient and parameters disagree in length");
  }
  if (!(lr > 0.0)) throw Error(ErrorKind::invalid_config, "learning rate must be positive");
  if (!grad.allFinite()) throw Error(ErrorKind::non_finite, "gradient contains NaN or Inf");

  const long t = state.step_count + 1;
  Eigen::VectorXd m = state.beta1 * state.m + (1.0 - state.beta1) * grad;
  Eigen::VectorXd v = state.beta2 * state.v + (1.0 - state.beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(t));
  Eigen::VectorXd delta = (-lr * (m / c1).array() / ((v / c2).array().sqrt() + state.eps)).matrix();
  if (mask) {
    const Eigen::ArrayXd keep = mask->array();
    delta.array() *= keep;
    m = (keep * m.array() + (1.0 - keep) * state.m.array()).matrix();
    v = (keep * v.array() + (1.0 - keep) * state.v.array()).matrix();
  }
  if (!delta.allFinite()) throw Error(ErrorKind::non_finite, "Adam update is not finite");
  params += delta;
  state.m = std::move(m);
  state.v = std::move(v);
  state.step_count = t;
}

}  // namespace adepinn
