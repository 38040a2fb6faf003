#include "adepinn/jet_batch.hpp"

namespace adepinn {

JetBatch field_jets(const ScalarField& field, const Eigen::MatrixXd& points, const JetRequest& req) {
  const Eigen::Index k = points.rows();
  const Eigen::Index b = points.cols();
  JetBatch out = JetBatch::zeros(k, b);
  for (Eigen::Index j = 0; j < b; ++j) {
    const std::span<const double> p(points.col(j).data(), static_cast<std::size_t>(k));
    if (req.order == 0) {
      out.value[j] = field(p);
      continue;
    }
    const Jet2 jet = field.jet(p);
    out.value[j] = jet.value;
    out.grad.col(j) = jet.grad;
    if (req.order >= 2) {
      for (int axis : req.second_axes) out.hess(axis, j) = jet.hess_diag[axis];
    }
  }
  if (!out.value.allFinite() || !out.grad.allFinite() || !out.hess.allFinite()) {
    throw Error(ErrorKind::non_finite, "field jets contain NaN or Inf");
  }
  return out;
}

JetBatch compose_ansatz(const JetBatch& g, const JetBatch& d, const JetBatch& n) {
  JetBatch u;
  u.value = g.value.array() + d.value.array() * n.value.array();
  const auto dv = d.value.transpose().array();
  const auto nv = n.value.transpose().array();
  u.grad = g.grad.array() + d.grad.array().rowwise() * nv + n.grad.array().rowwise() * dv;
  u.hess = g.hess.array() + d.hess.array().rowwise() * nv +
           2.0 * d.grad.array() * n.grad.array() + n.hess.array().rowwise() * dv;
  return u;
}

JetBatch compose_ansatz_adjoint(const JetBatch& d, const JetBatch& adj_u) {
  JetBatch adj_n;
  const auto dv = d.value.transpose().array();
  adj_n.value = adj_u.value.array() * d.value.array() +
                (adj_u.grad.array() * d.grad.array()).colwise().sum().transpose() +
                (adj_u.hess.array() * d.hess.array()).colwise().sum().transpose();
  adj_n.grad = adj_u.grad.array().rowwise() * dv + 2.0 * adj_u.hess.array() * d.grad.array();
  adj_n.hess = adj_u.hess.array().rowwise() * dv;
  return adj_n;
}

}  // namespace adepinn
