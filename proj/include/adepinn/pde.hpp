#pragma once
/**
 * @file pde.hpp
 * @brief Advection-diffusion problems u_t - p Laplace(u) + q . grad(u) = f.
 *
 * Points are (x[, y[, z]], t) with time last. Neumann data prescribe the
 * derivative along the face's coordinate axis, not the outward normal
 * derivative, so du/dx(a, t) = N1(t) reads the same on both ends.
 */

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "adepinn/diffengine.hpp"
#include "adepinn/domain.hpp"
#include "adepinn/jet_batch.hpp"

namespace adepinn {

using PointFn = std::function<double(std::span<const double>)>;

struct AdeCoefficients {
  double p = 1.0;     ///< scalar diffusion
  Eigen::VectorXd q;  ///< advection velocity, one entry per spatial axis
};

enum class BcType { dirichlet, neumann };

std::string_view to_string(BcType type);

struct FaceCondition {
  BcType type = BcType::dirichlet;
  PointFn data;  ///< g for Dirichlet faces, N for Neumann faces
};

struct BoundarySpec {
  std::vector<FaceCondition> faces;  ///< indexed by face id of the problem domain
  PointFn initial;                   ///< h(x), called with the full point (x, t0)
  double t0 = 0.0;
  double t_end = 1.0;

  std::vector<int> faces_of(BcType type, int face_limit = -1) const;
  bool any(BcType type, int face_limit = -1) const { return !faces_of(type, face_limit).empty(); }
};

struct AdeProblem {
  std::string id;
  AdeCoefficients coeffs;
  Domain domain;
  BoundarySpec bc;
  PointFn forcing;
  ScalarField exact;  ///< empty when no closed-form solution is known

  int spatial_dim() const { return domain.dim(); }
  int input_dim() const { return domain.dim() + 1; }
  bool has_exact() const { return static_cast<bool>(exact); }
  /// Faces that exist on the training domain (outer box faces for holed domains).
  int training_face_count() const { return domain.training_domain().face_count(); }
  void validate() const;
};

/// f = u_t - p Laplace(u) + q . grad(u) evaluated through input jets of `exact`.
PointFn manufactured_forcing(const ScalarField& exact, const AdeCoefficients& coeffs);

/// Builds a problem whose forcing and boundary/initial data all derive from `exact`.
AdeProblem problem_from_exact(std::string id, AdeCoefficients coeffs, Domain domain, ScalarField exact,
                              const std::vector<BcType>& face_types, double t0, double t_end);

/// PDE operator applied to a jet at `point`, minus the forcing there.
double residual_from_jet(const Jet2& jet, std::span<const double> point, const AdeProblem& problem);

template <class F>
double residual(F&& predictor, std::span<const double> point, const AdeProblem& problem) {
  if (static_cast<int>(point.size()) != problem.input_dim()) {
    throw Error(ErrorKind::shape_mismatch, "point dimension != problem input dimension");
  }
  return residual_from_jet(eval_jet2(predictor, point), point, problem);
}

/// Neumann face with normal `axis` that contains `point`; throws FaceMismatch if none.
int neumann_face_at(std::span<const double> point, int axis, const AdeProblem& problem);

template <class F>
double neumann_residual(F&& predictor, std::span<const double> point, int axis,
                        const AdeProblem& problem) {
  const int face = neumann_face_at(point, axis, problem);
  const Jet2 jet = eval_jet2(predictor, point);
  return jet.grad[axis] - problem.bc.faces[static_cast<std::size_t>(face)].data(point);
}

/// Residuals for a batch, given jets carrying the spatial Laplacian and the forcing values.
Eigen::VectorXd residual_batch(const JetBatch& u, const Eigen::VectorXd& forcing,
                               const AdeCoefficients& coeffs);

/// Adjoint of `residual_batch`: jets adjoint for a residual adjoint `adj_r`.
JetBatch residual_batch_adjoint(const Eigen::VectorXd& adj_r, const AdeCoefficients& coeffs,
                                Eigen::Index input_dim);

/// Evaluates a point function on every column of `points`.
Eigen::VectorXd evaluate(const PointFn& fn, const Eigen::MatrixXd& points);
Eigen::VectorXd evaluate(const ScalarField& fn, const Eigen::MatrixXd& points);

}  // namespace adepinn
