#pragma once
/**
 * @file diffengine.hpp
 * @brief Exact input derivatives and parameter gradients of scalar functions.
 *
 * A "predictor" is any callable that accepts `std::span<const S>` holding the
 * coordinates (x[, y[, z]], t) and returns `S`, for every scalar `S` it is
 * instantiated with (`double`, `ad::Dual2<double>`, `ad::Dual2<ad::Var>`).
 * Generic lambdas written with unqualified math calls satisfy this.
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "adepinn/ad.hpp"
#include "adepinn/error.hpp"

namespace adepinn {

using Dual2d = ad::Dual2<double>;

/// Value, gradient and pure second derivatives at one point.
struct Jet2 {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::VectorXd hess_diag;
};

namespace detail {
inline void require_finite(const Jet2& j) {
  if (!std::isfinite(j.value) || !j.grad.allFinite() || !j.hess_diag.allFinite()) {
    throw Error(ErrorKind::non_finite, "jet contains NaN or Inf");
  }
}
}  // namespace detail

/// One forward pass per input coordinate, each seeding that coordinate.
template <class F>
Jet2 eval_jet2(F&& predictor, std::span<const double> point) {
  const auto k = static_cast<Eigen::Index>(point.size());
  Jet2 out;
  out.grad.resize(k);
  out.hess_diag.resize(k);
  std::vector<Dual2d> z(point.begin(), point.end());
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) z[j] = Dual2d(point[j]);
    z[i] = Dual2d::variable(point[i]);
    const Dual2d r = predictor(std::span<const Dual2d>(z));
    out.value = r.v;
    out.grad[i] = r.d;
    out.hess_diag[i] = r.dd;
  }
  if (k == 0) {
    out.value = ad::value_of(predictor(std::span<const Dual2d>(z)));
  }
  detail::require_finite(out);
  return out;
}

template <class F>
Jet2 eval_jet2(F&& predictor, const Eigen::Ref<const Eigen::VectorXd>& point) {
  return eval_jet2(std::forward<F>(predictor),
                   std::span<const double>(point.data(), static_cast<std::size_t>(point.size())));
}

/// Reverse-mode gradient of `loss(span<const ad::Var>) -> ad::Var`.
template <class F>
Eigen::VectorXd grad_params(F&& loss, const Eigen::Ref<const Eigen::VectorXd>& params) {
  ad::Tape tape;
  ad::ScopedTape scope(tape);
  std::vector<ad::Var> theta;
  theta.reserve(static_cast<std::size_t>(params.size()));
  for (Eigen::Index i = 0; i < params.size(); ++i) theta.push_back(ad::Var::leaf(params[i]));
  const ad::Var out = loss(std::span<const ad::Var>(theta));
  if (!std::isfinite(out.value())) throw Error(ErrorKind::non_finite, "loss is not finite");
  const std::vector<double> adj = tape.adjoints(out.index());
  Eigen::VectorXd g(params.size());
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    g[i] = adj[static_cast<std::size_t>(theta[static_cast<std::size_t>(i)].index())];
  }
  if (!g.allFinite()) throw Error(ErrorKind::non_finite, "parameter gradient is not finite");
  return g;
}

/// Discrepancy with floor 1: |a - b| / max(1, |a|, |b|).
inline double scaled_discrepancy(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

struct DerivativeReport {
  Eigen::VectorXd first;   ///< per-coordinate first-derivative discrepancy
  Eigen::VectorXd second;  ///< per-coordinate second-derivative discrepancy

  double max_first() const { return first.size() ? first.maxCoeff() : 0.0; }
  double max_second() const { return second.size() ? second.maxCoeff() : 0.0; }
  double max() const { return std::max(max_first(), max_second()); }
};

/// Compares engine derivatives with central finite differences of step `fd_step`.
template <class F>
DerivativeReport check_derivatives(F&& predictor, std::span<const double> point, double fd_step) {
  if (!(fd_step > 0.0)) throw Error(ErrorKind::invalid_config, "fd_step must be positive");
  const Jet2 jet = eval_jet2(predictor, point);
  const auto k = static_cast<Eigen::Index>(point.size());
  DerivativeReport rep{Eigen::VectorXd::Zero(k), Eigen::VectorXd::Zero(k)};
  std::vector<double> z(point.begin(), point.end());
  const auto f = [&](std::vector<double>& at) {
    return static_cast<double>(predictor(std::span<const double>(at)));
  };
  const double f0 = f(z);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double xi = z[i];
    z[i] = xi + fd_step;
    const double fp = f(z);
    z[i] = xi - fd_step;
    const double fm = f(z);
    z[i] = xi;
    const double d1 = (fp - fm) / (2.0 * fd_step);
    const double d2 = (fp - 2.0 * f0 + fm) / (fd_step * fd_step);
    rep.first[i] = scaled_discrepancy(jet.grad[i], d1);
    rep.second[i] = scaled_discrepancy(jet.hess_diag[i], d2);
  }
  return rep;
}

/**
 * Type-erased scalar function of (x[, y[, z]], t) usable both for plain
 * evaluation and for input jets. Built from any generic predictor.
 */
class ScalarField {
 public:
  ScalarField() = default;

  template <class F>
    requires(!std::is_same_v<std::remove_cvref_t<F>, ScalarField>)
  ScalarField(F f)  // NOLINT: implicit wrapping of lambdas is intended
      : value_([f](std::span<const double> z) { return static_cast<double>(f(z)); }),
        dual_([f](std::span<const Dual2d> z) { return static_cast<Dual2d>(f(z)); }) {}

  explicit operator bool() const { return static_cast<bool>(value_); }

  double operator()(std::span<const double> z) const { return value_(z); }
  Dual2d operator()(std::span<const Dual2d> z) const { return dual_(z); }
  double operator()(const Eigen::Ref<const Eigen::VectorXd>& z) const {
    return value_(std::span<const double>(z.data(), static_cast<std::size_t>(z.size())));
  }

  Jet2 jet(std::span<const double> z) const { return eval_jet2(*this, z); }
  Jet2 jet(const Eigen::Ref<const Eigen::VectorXd>& z) const { return eval_jet2(*this, z); }

 private:
  std::function<double(std::span<const double>)> value_;
  std::function<Dual2d(std::span<const Dual2d>)> dual_;
};

}  // namespace adepinn
