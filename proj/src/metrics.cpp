#include "adepinn/metrics.hpp"

#include "adepinn/csv.hpp"
#include "adepinn/error.hpp"

namespace adepinn {

namespace {
void check_pair(const Eigen::Ref<const Eigen::VectorXd>& pred, const Eigen::Ref<const Eigen::VectorXd>& exact) {
  if (pred.size() != exact.size()) throw Error(ErrorKind::length_mismatch, "pred and exact differ in length");
  if (pred.size() == 0) throw Error(ErrorKind::empty_input, "no values to compare");
}
}  // namespace

double mse(const Eigen::Ref<const Eigen::VectorXd>& pred, const Eigen::Ref<const Eigen::VectorXd>& exact) {
  check_pair(pred, exact);
  return (pred - exact).squaredNorm() / static_cast<double>(pred.size());
}

double rel(const Eigen::Ref<const Eigen::VectorXd>& pred, const Eigen::Ref<const Eigen::VectorXd>& exact) {
  check_pair(pred, exact);
  const double den = exact.squaredNorm();
  if (!(den > 0.0)) throw Error(ErrorKind::zero_denominator, "exact values are identically zero");
  return (pred - exact).squaredNorm() / den;
}

ErrorSummary summarize(const Eigen::Ref<const Eigen::VectorXd>& pred, const Eigen::Ref<const Eigen::VectorXd>& exact) {
  ErrorSummary s;
  s.mse = mse(pred, exact);
  s.rel = rel(pred, exact);
  s.max_abs = (pred - exact).cwiseAbs().maxCoeff();
  s.n_points = pred.size();
  return s;
}

ErrorField error_field_from_values(const Eigen::MatrixXd& points, const Eigen::VectorXd& pred,
                                   const Eigen::VectorXd& exact) {
  if (pred.size() != exact.size() || pred.size() != points.cols()) {
    throw Error(ErrorKind::length_mismatch, "error field inputs differ in length");
  }
  return {points, (pred - exact).cwiseAbs()};
}

void write_error_field_csv(std::ostream& out, const ErrorField& field) {
  const Eigen::Index k = field.points.rows();
  out << coordinate_header(static_cast<int>(k)) << ",abs_error\n";
  for (Eigen::Index j = 0; j < field.points.cols(); ++j) {
    for (Eigen::Index i = 0; i < k; ++i) out << format_double(field.points(i, j)) << ',';
    out << format_double(field.abs_error[j]) << '\n';
  }
}

}  // namespace adepinn
