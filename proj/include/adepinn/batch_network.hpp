#pragma once
/**
 * @file batch_network.hpp
 * @brief Batched second-order jet propagation through a network, with its
 *        reverse pass for parameter gradients.
 *
 * A batch of B points is pushed through every layer as one wide matrix whose
 * column blocks are channels: the value, one first-derivative channel per
 * input coordinate, and one pure-second-derivative channel per requested
 * axis. For y = sigma(z) the channels transform as
 *
 *     y     = sigma(z)
 *     y_i   = sigma'(z) z_i
 *     y_ii  = sigma''(z) z_i^2 + sigma'(z) z_ii
 *
 * and `batch_backward` replays the recorded trace in reverse, which needs
 * sigma''' for the last rule.
 */

#include <vector>

#include <Eigen/Core>

#include "adepinn/activation.hpp"
#include "adepinn/jet_batch.hpp"
#include "adepinn/network.hpp"

namespace adepinn {

struct LayerTrace {
  Eigen::MatrixXd input;  ///< width_in x (C*B)
  Eigen::MatrixXd pre;    ///< effective pre-activation (rows doubled for Fourier layers)
  ActivationTaylor taylor;
};

struct ForwardTrace {
  JetRequest request;
  Eigen::Index batch = 0;
  int channels = 0;
  std::vector<std::vector<LayerTrace>> subnets;
  std::vector<Eigen::RowVectorXd> outputs;  ///< F_n channels, 1 x (C*B)
};

/// Jets of the ensemble output on the columns of `points` (k x B).
JetBatch batch_forward(const ParamStore& params, const Eigen::MatrixXd& points,
                       const JetRequest& request, ForwardTrace* trace = nullptr);

/// Accumulates d loss / d theta into `grad`, given d loss / d (output jets).
void batch_backward(const ParamStore& params, const ForwardTrace& trace, const JetBatch& adjoint,
                    Eigen::Ref<Eigen::VectorXd> grad);

}  // namespace adepinn
