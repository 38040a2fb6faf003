#pragma once

#include <vector>

#include <Eigen/Core>

#include "adepinn/diffengine.hpp"

namespace adepinn {

/// Which derivatives to propagate for a batch of points.
struct JetRequest {
  int order = 0;                  ///< 0: value, 1: + gradient, 2: + selected second derivatives
  std::vector<int> second_axes;   ///< coordinates whose pure second derivative is needed

  static JetRequest values() { return {}; }
  static JetRequest gradients() { return {1, {}}; }
  /// Gradient plus the second derivatives in the first `spatial_dim` coordinates.
  static JetRequest laplacian(int spatial_dim) {
    JetRequest r{2, {}};
    for (int i = 0; i < spatial_dim; ++i) r.second_axes.push_back(i);
    return r;
  }
  static JetRequest full(int input_dim) { return laplacian(input_dim); }

  int first_channels(int input_dim) const { return order >= 1 ? input_dim : 0; }
  int second_channels() const { return order >= 2 ? static_cast<int>(second_axes.size()) : 0; }
};

/// Jets of a scalar predictor at B points with k input coordinates.
/// `grad` and `hess` are always k x B; entries the request did not ask for
/// are zero when produced by an evaluator and unspecified after composition.
struct JetBatch {
  Eigen::VectorXd value;  ///< B
  Eigen::MatrixXd grad;   ///< k x B
  Eigen::MatrixXd hess;   ///< k x B

  Eigen::Index size() const { return value.size(); }

  static JetBatch zeros(Eigen::Index k, Eigen::Index b) {
    return {Eigen::VectorXd::Zero(b), Eigen::MatrixXd::Zero(k, b), Eigen::MatrixXd::Zero(k, b)};
  }
  static JetBatch constant(Eigen::Index k, Eigen::Index b, double c) {
    JetBatch j = zeros(k, b);
    j.value.setConstant(c);
    return j;
  }
};

/// Point-by-point jets of a scalar field (columns of `points` are points).
JetBatch field_jets(const ScalarField& field, const Eigen::MatrixXd& points, const JetRequest& req);

/// u = g + d * n with the product rule applied channel by channel.
JetBatch compose_ansatz(const JetBatch& g, const JetBatch& d, const JetBatch& n);

/// Adjoint of `compose_ansatz` with respect to n, given the adjoint of u.
JetBatch compose_ansatz_adjoint(const JetBatch& d, const JetBatch& adj_u);

}  // namespace adepinn
