#pragma once
/**
 * @file training.hpp
 * @brief Soft and hard losses, penalty and learning-rate schedules, and the
 *        training loop.
 *
 * The generic loss functions accept any predictor and differentiate it point
 * by point; `train` uses the batched network path with hand-derived adjoints
 * of the same losses.
 */

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "adepinn/constraints.hpp"
#include "adepinn/metrics.hpp"
#include "adepinn/network.hpp"
#include "adepinn/optim.hpp"
#include "adepinn/pde.hpp"
#include "adepinn/presets.hpp"
#include "adepinn/sampling.hpp"

namespace adepinn {

enum class ModelKind { pinn, sfpinn, sfhcpinn, sfhcpinn_nn };

ModelKind parse_model(std::string_view name);
std::string_view to_string(ModelKind kind);
inline bool is_hard(ModelKind m) { return m == ModelKind::sfhcpinn || m == ModelKind::sfhcpinn_nn; }

/// Piecewise-constant multiplier over fractions of the total epoch budget.
struct Staircase {
  std::vector<double> starts{0.0, 0.1, 0.2, 0.25, 0.5, 0.75};
  std::vector<double> multipliers{1.0, 10.0, 50.0, 100.0, 200.0, 500.0};

  double operator()(long epoch, long t_max) const;
  void validate() const;
};

struct LossWeights {
  double gamma0 = 20.0;  ///< boundary penalty base
  double omega0 = 20.0;  ///< initial-condition penalty base (soft mode)
  bool omega_scheduled = true;
  Staircase schedule;

  double gamma(long epoch, long t_max) const { return gamma0 * schedule(epoch, t_max); }
  double omega(long epoch, long t_max) const { return omega_scheduled ? omega0 * schedule(epoch, t_max) : omega0; }
  void validate() const;
};

double gamma_schedule(long epoch, long t_max, double gamma0 = 20.0);

struct LrSchedule {
  double lr0 = 0.01;
  double decay = 0.975;
  long every = 100;

  double operator()(long epoch) const;
};

double lr_schedule(long epoch);

/// Weighted loss terms; total = pde + bc + ic.
struct LossComponents {
  double total = 0.0;
  double pde = 0.0;
  double bc = 0.0;
  double ic = 0.0;
};

struct TrainBatches {
  SampleBatch interior;
  SampleBatch boundary;
  SampleBatch initial;
};

namespace detail {

inline std::span<const double> column(const Eigen::MatrixXd& m, Eigen::Index j) {
  return {m.col(j).data(), static_cast<std::size_t>(m.rows())};
}

template <class P>
double mean_sq_residual(const P& predictor, const SampleBatch& s_r, const AdeProblem& problem) {
  if (s_r.size() == 0) throw Error(ErrorKind::empty_sample_set, "interior batch is empty");
  double acc = 0.0;
  for (Eigen::Index j = 0; j < s_r.size(); ++j) {
    const double r = residual(predictor, column(s_r.points, j), problem);
    acc += r * r;
  }
  return acc / static_cast<double>(s_r.size());
}

/// Mismatch of the face's condition at boundary sample j.
template <class P>
double boundary_mismatch(const P& predictor, const SampleBatch& s_b, Eigen::Index j, const AdeProblem& problem) {
  const auto z = column(s_b.points, j);
  const int face = s_b.face[static_cast<std::size_t>(j)];
  const FaceCondition& c = problem.bc.faces[static_cast<std::size_t>(face)];
  if (c.type == BcType::dirichlet) return static_cast<double>(predictor(z)) - c.data(z);
  const int axis = problem.domain.face_axis(face);
  return eval_jet2(predictor, z).grad[axis] - c.data(z);
}

inline void require_finite(const LossComponents& c) {
  if (!std::isfinite(c.total)) throw Error(ErrorKind::non_finite, "loss is not finite");
}

}  // namespace detail

/// Residual term + gamma * boundary mismatch + omega * initial mismatch.
template <class P>
LossComponents soft_loss(const P& predictor, const TrainBatches& b, const AdeProblem& problem,
                         const LossWeights& w, long epoch, long t_max) {
  LossComponents c;
  c.pde = detail::mean_sq_residual(predictor, b.interior, problem);
  if (b.boundary.size() > 0) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < b.boundary.size(); ++j) {
      const double m = detail::boundary_mismatch(predictor, b.boundary, j, problem);
      acc += m * m;
    }
    c.bc = w.gamma(epoch, t_max) * acc / static_cast<double>(b.boundary.size());
  }
  if (b.initial.size() > 0) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < b.initial.size(); ++j) {
      const auto z = detail::column(b.initial.points, j);
      const double m = static_cast<double>(predictor(z)) - problem.bc.initial(z);
      acc += m * m;
    }
    c.ic = w.omega(epoch, t_max) * acc / static_cast<double>(b.initial.size());
  }
  c.total = c.pde + c.bc + c.ic;
  detail::require_finite(c);
  return c;
}

/// Mean squared residual only: D and G carry every boundary and initial condition.
template <class P>
double hard_loss_dirichlet(const P& ansatz, const SampleBatch& s_r, const AdeProblem& problem) {
  const double v = detail::mean_sq_residual(ansatz, s_r, problem);
  if (!std::isfinite(v)) throw Error(ErrorKind::non_finite, "loss is not finite");
  return v;
}

/// Mean squared residual + gamma * mean squared Neumann flux mismatch on `s_b`.
template <class P>
LossComponents hard_loss_neumann(const P& ansatz, const SampleBatch& s_r, const SampleBatch& s_b,
                                 const AdeProblem& problem, const LossWeights& w, long epoch, long t_max) {
  LossComponents c;
  c.pde = detail::mean_sq_residual(ansatz, s_r, problem);
  if (s_b.size() > 0) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < s_b.size(); ++j) {
      const auto z = detail::column(s_b.points, j);
      const int axis = problem.domain.face_axis(s_b.face[static_cast<std::size_t>(j)]);
      const double m = neumann_residual(ansatz, z, axis, problem);
      acc += m * m;
    }
    c.bc = w.gamma(epoch, t_max) * acc / static_cast<double>(s_b.size());
  }
  c.total = c.pde + c.bc;
  detail::require_finite(c);
  return c;
}

struct TrainRecord {
  long epoch = 0;
  double loss_total = 0.0;
  double loss_pde = 0.0;
  double loss_bc = 0.0;
  double loss_ic = 0.0;
  double mse = 0.0;
  double rel = 0.0;
  double lr = 0.0;
  double gamma = 0.0;
};

struct TrainConfig {
  Preset problem;
  ModelKind model = ModelKind::sfhcpinn;
  EnsembleSpec network;
  long epochs = 5000;
  Eigen::Index n_r = 2000;
  Eigen::Index n_b = 500;
  Eigen::Index n_i = 500;
  std::uint64_t seed = 0;
  long eval_every = 1000;
  bool resample = true;  ///< fresh collocation points each epoch (seed + epoch)
  LossWeights weights;
  LrSchedule lr;
  MlpSpec fit_spec;      ///< sfhcpinn_nn: network for fitted D and G (input_dim is set from the problem)
  FitOptions fit;
  Eigen::Index fit_samples = 1000;
  std::function<void(const TrainRecord&)> on_eval;  ///< called after each evaluation

  void validate() const;
};

struct TrainResult {
  explicit TrainResult(ParamStore initial) : params(std::move(initial)) {}

  std::vector<TrainRecord> history;  ///< one row per epoch, before that epoch's step
  ParamStore params;
  ErrorSummary summary;               ///< final parameters on the test slice
  FieldModel distance;                ///< D and G used (hard models)
  FieldModel extension;
  SampleBatch test;
  Eigen::VectorXd test_prediction;
  Eigen::VectorXd test_exact;
  double fit_distance_max_boundary = 0.0;  ///< sfhcpinn_nn diagnostics
  double fit_extension_loss = 0.0;
};

/// Raised when training meets a non-finite loss, gradient or update.
class TrainingDiverged : public Error {
 public:
  TrainingDiverged(const std::string& what, long epoch, ParamStore last_good, std::vector<TrainRecord> history)
      : Error(ErrorKind::non_finite, what), epoch_(epoch), last_good_(std::move(last_good)),
        history_(std::move(history)) {}
  long epoch() const { return epoch_; }
  const ParamStore& last_good() const { return last_good_; }
  const std::vector<TrainRecord>& history() const { return history_; }

 private:
  long epoch_;
  ParamStore last_good_;
  std::vector<TrainRecord> history_;
};

TrainResult train(const TrainConfig& config);

/**
 * Batched loss and parameter gradient for one set of collocation batches,
 * the same quantity `train` minimizes. `grad` may be null.
 */
class LossEvaluator {
 public:
  LossEvaluator(const TrainConfig& config, FieldModel distance, FieldModel extension);

  /// Samples the batches used at `epoch` (fresh per epoch unless resampling is off).
  TrainBatches sample(long epoch) const;
  LossComponents evaluate(const ParamStore& params, const TrainBatches& batches, long epoch,
                          Eigen::VectorXd* grad) const;
  /// Ansatz (hard) or network (soft) values at the columns of `points`.
  Eigen::VectorXd predict(const ParamStore& params, const Eigen::MatrixXd& points) const;

 private:
  const TrainConfig* cfg_;
  FieldModel d_;
  FieldModel g_;
  Domain train_domain_;
  std::vector<int> bc_faces_;  ///< faces sampled for the boundary term
};

/// Fitted D and G for the sfhcpinn_nn variant.
struct FittedConstraints {
  FitResult distance;
  FitResult extension;
};
FittedConstraints fit_constraints(const Preset& preset, const MlpSpec& spec, const FitOptions& opts,
                                  Eigen::Index n_samples);

void write_history_csv(std::ostream& out, const std::vector<TrainRecord>& history);

}  // namespace adepinn
