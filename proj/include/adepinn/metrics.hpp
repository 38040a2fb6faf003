#pragma once
/**
 * @file metrics.hpp
 * @brief MSE and REL error criteria, and point-wise error fields.
 *
 * REL is the *squared* relative L2 error, sum (u - u*)^2 / sum (u*)^2.
 * Take its square root before comparing with a plain relative L2 norm.
 */

#include <ostream>
#include <span>

#include <Eigen/Core>

#include "adepinn/sampling.hpp"

namespace adepinn {

struct ErrorSummary {
  double mse = 0.0;
  double rel = 0.0;
  double max_abs = 0.0;
  Eigen::Index n_points = 0;
};

double mse(const Eigen::Ref<const Eigen::VectorXd>& pred, const Eigen::Ref<const Eigen::VectorXd>& exact);
double rel(const Eigen::Ref<const Eigen::VectorXd>& pred, const Eigen::Ref<const Eigen::VectorXd>& exact);
ErrorSummary summarize(const Eigen::Ref<const Eigen::VectorXd>& pred, const Eigen::Ref<const Eigen::VectorXd>& exact);

struct ErrorField {
  Eigen::MatrixXd points;     ///< (d+1) x n
  Eigen::VectorXd abs_error;  ///< n
};

/// |predictor - exact| at every test point.
template <class P, class E>
ErrorField pointwise_error_field(const P& predictor, const E& exact, const SampleBatch& batch) {
  ErrorField f{batch.points, Eigen::VectorXd(batch.size())};
  const auto k = static_cast<std::size_t>(batch.points.rows());
  for (Eigen::Index j = 0; j < batch.size(); ++j) {
    const std::span<const double> z(batch.points.col(j).data(), k);
    f.abs_error[j] = std::abs(static_cast<double>(predictor(z)) - static_cast<double>(exact(z)));
  }
  return f;
}

ErrorField error_field_from_values(const Eigen::MatrixXd& points, const Eigen::VectorXd& pred,
                                   const Eigen::VectorXd& exact);

/// CSV with header x[,y[,z]],t,abs_error.
void write_error_field_csv(std::ostream& out, const ErrorField& field);

}  // namespace adepinn
