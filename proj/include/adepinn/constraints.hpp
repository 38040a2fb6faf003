#pragma once
/**
 * @file constraints.hpp
 * @brief Distance functions D, extension functions G and the hard ansatz
 *        u = G + D * core.
 *
 * D and G are either closed-form expressions or small fitted networks; both
 * expose point evaluation, input jets and batched jets through `FieldModel`.
 */

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "adepinn/batch_network.hpp"
#include "adepinn/diffengine.hpp"
#include "adepinn/network.hpp"
#include "adepinn/pde.hpp"

namespace adepinn {

/// A scalar field of (x, t): closed form or fitted network.
class FieldModel {
 public:
  FieldModel() = default;
  FieldModel(ScalarField f);  // NOLINT: implicit from expressions is intended
  static FieldModel network(ParamStore params);

  explicit operator bool() const { return static_cast<bool>(field_); }
  bool is_network() const { return static_cast<bool>(net_); }
  const ParamStore* params() const { return net_.get(); }
  const ScalarField& field() const { return field_; }

  double operator()(std::span<const double> z) const { return field_(z); }
  Dual2d operator()(std::span<const Dual2d> z) const { return field_(z); }
  double operator()(const Eigen::Ref<const Eigen::VectorXd>& z) const { return field_(z); }

  JetBatch jets(const Eigen::MatrixXd& points, const JetRequest& request) const;

 private:
  ScalarField field_;
  std::shared_ptr<const ParamStore> net_;
};

/// Where a distance function must vanish: listed faces (times the whole time range) and/or t = t0.
struct VanishingSet {
  std::vector<int> faces;
  bool initial_time = false;
  double t0 = 0.0;
};

struct DistanceFn {
  FieldModel eval;
  VanishingSet vanishing;
};

struct ExtensionFn {
  FieldModel eval;
};

/// u = G + D * core; a predictor in its own right.
struct HardAnsatz {
  ExtensionFn g;
  DistanceFn d;
  ScalarField core;

  double operator()(std::span<const double> z) const { return g.eval(z) + d.eval(z) * core(z); }
  Dual2d operator()(std::span<const Dual2d> z) const { return g.eval(z) + d.eval(z) * core(z); }
};

double hard_ansatz_eval(const HardAnsatz& a, std::span<const double> point);

/// min over the columns of `samples` of the Euclidean distance to `point`.
double min_distance_estimate(const Eigen::Ref<const Eigen::VectorXd>& point, const Eigen::MatrixXd& samples);

/// 0 on the vanishing set (within `tol`), 1 elsewhere.
double indicator_distance(const Eigen::Ref<const Eigen::VectorXd>& point, const VanishingSet& set,
                          const Domain& domain, double tol = 1e-9);

/// Space-time points on the vanishing set: faces x [t0, T] in proportion to measure, plus domain x {t0}.
Eigen::MatrixXd vanishing_samples(const Domain& domain, const VanishingSet& set, double t_end,
                                  Eigen::Index n, std::uint64_t seed);

struct FitOptions {
  int steps = 3000;
  double lr = 0.01;
  std::uint64_t seed = 0;
};

/// Network used by default for fitted D and G: one hidden layer of 20 tanh units.
MlpSpec default_fit_spec(int input_dim);

struct FitResult {
  ParamStore params;
  double final_loss = 0.0;    ///< mean squared mismatch on the fitting set
  double max_boundary = 0.0;  ///< distance fits: max |D| over the boundary samples
};

/// Least-squares fit of a small network to values `targets` at the columns of `points`.
FitResult fit_extension(const Eigen::MatrixXd& points, const Eigen::VectorXd& targets, const MlpSpec& spec,
                        const FitOptions& opts);

/// Fits D to 0 on `boundary` and to the nearest-boundary distance on `interior`.
FitResult fit_distance(const Eigen::MatrixXd& boundary, const Eigen::MatrixXd& interior, const MlpSpec& spec,
                       const FitOptions& opts);

}  // namespace adepinn
