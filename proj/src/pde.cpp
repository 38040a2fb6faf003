#include "adepinn/pde.hpp"

#include <cmath>

namespace adepinn {

std::string_view to_string(BcType type) {
  return type == BcType::dirichlet ? "dirichlet" : "neumann";
}

std::vector<int> BoundarySpec::faces_of(BcType type, int face_limit) const {
  std::vector<int> out;
  const int n = face_limit < 0 ? static_cast<int>(faces.size())
                               : std::min(face_limit, static_cast<int>(faces.size()));
  for (int f = 0; f < n; ++f) {
    if (faces[static_cast<std::size_t>(f)].type == type) out.push_back(f);
  }
  return out;
}

void AdeProblem::validate() const {
  if (!(coeffs.p > 0.0)) throw Error(ErrorKind::invalid_config, "diffusion p must be positive");
  if (coeffs.q.size() != domain.dim()) {
    throw Error(ErrorKind::invalid_config, "advection vector length != spatial dimension");
  }
  if (static_cast<int>(bc.faces.size()) != domain.face_count()) {
    throw Error(ErrorKind::invalid_config, "every face needs exactly one boundary condition");
  }
  for (const FaceCondition& c : bc.faces) {
    if (!c.data) throw Error(ErrorKind::invalid_config, "boundary condition without data");
  }
  for (int f : bc.faces_of(BcType::neumann)) {
    if (domain.face_axis(f) < 0) {
      throw Error(ErrorKind::invalid_config, "Neumann data are only supported on planar box faces");
    }
  }
  if (!bc.initial || !forcing) throw Error(ErrorKind::invalid_config, "missing initial data or forcing");
  if (!(bc.t0 < bc.t_end)) throw Error(ErrorKind::invalid_config, "time range needs t0 < T");
}

PointFn manufactured_forcing(const ScalarField& exact, const AdeCoefficients& coeffs) {
  if (!exact) throw Error(ErrorKind::invalid_config, "manufactured forcing needs an exact solution");
  return [exact, coeffs](std::span<const double> z) {
    const Jet2 j = exact.jet(z);
    const Eigen::Index d = static_cast<Eigen::Index>(z.size()) - 1;
    if (coeffs.q.size() != d) throw Error(ErrorKind::shape_mismatch, "advection vector length mismatch");
    return j.grad[d] - coeffs.p * j.hess_diag.head(d).sum() + coeffs.q.dot(j.grad.head(d));
  };
}

AdeProblem problem_from_exact(std::string id, AdeCoefficients coeffs, Domain domain, ScalarField exact,
                              const std::vector<BcType>& face_types, double t0, double t_end) {
  AdeProblem p;
  p.id = std::move(id);
  p.coeffs = std::move(coeffs);
  p.domain = std::move(domain);
  p.exact = exact;
  p.forcing = manufactured_forcing(exact, p.coeffs);
  p.bc.t0 = t0;
  p.bc.t_end = t_end;
  p.bc.initial = [exact, t0](std::span<const double> z) {
    std::vector<double> w(z.begin(), z.end());
    w.back() = t0;
    return exact(std::span<const double>(w));
  };
  if (static_cast<int>(face_types.size()) != p.domain.face_count()) {
    throw Error(ErrorKind::invalid_config, "face type list length != face count");
  }
  for (std::size_t f = 0; f < face_types.size(); ++f) {
    FaceCondition c;
    c.type = face_types[f];
    if (c.type == BcType::dirichlet) {
      c.data = [exact](std::span<const double> z) { return exact(z); };
    } else {
      const int axis = p.domain.face_axis(static_cast<int>(f));
      if (axis < 0) throw Error(ErrorKind::invalid_config, "Neumann data need a planar face");
      c.data = [exact, axis](std::span<const double> z) { return exact.jet(z).grad[axis]; };
    }
    p.bc.faces.push_back(std::move(c));
  }
  p.validate();
  return p;
}

double residual_from_jet(const Jet2& jet, std::span<const double> point, const AdeProblem& problem) {
  const Eigen::Index d = problem.spatial_dim();
  const double r = jet.grad[d] - problem.coeffs.p * jet.hess_diag.head(d).sum() +
                   problem.coeffs.q.dot(jet.grad.head(d)) - problem.forcing(point);
  if (!std::isfinite(r)) throw Error(ErrorKind::non_finite, "residual is not finite");
  return r;
}

int neumann_face_at(std::span<const double> point, int axis, const AdeProblem& problem) {
  const Eigen::Index d = problem.spatial_dim();
  if (static_cast<Eigen::Index>(point.size()) != d + 1) {
    throw Error(ErrorKind::shape_mismatch, "point dimension != problem input dimension");
  }
  const Eigen::Map<const Eigen::VectorXd> x(point.data(), d);
  for (int f : problem.bc.faces_of(BcType::neumann)) {
    if (problem.domain.face_axis(f) == axis && problem.domain.on_face(x, f)) return f;
  }
  throw Error(ErrorKind::face_mismatch, "point is not on a Neumann face with the given axis");
}

Eigen::VectorXd residual_batch(const JetBatch& u, const Eigen::VectorXd& forcing,
                               const AdeCoefficients& coeffs) {
  const Eigen::Index d = coeffs.q.size();
  if (u.grad.rows() != d + 1 || forcing.size() != u.size()) {
    throw Error(ErrorKind::shape_mismatch, "residual batch shapes disagree");
  }
  return u.grad.row(d).transpose() - coeffs.p * u.hess.topRows(d).colwise().sum().transpose() +
         u.grad.topRows(d).transpose() * coeffs.q - forcing;
}

JetBatch residual_batch_adjoint(const Eigen::VectorXd& adj_r, const AdeCoefficients& coeffs,
                                Eigen::Index input_dim) {
  const Eigen::Index d = input_dim - 1;
  JetBatch a = JetBatch::zeros(input_dim, adj_r.size());
  a.grad.row(d) = adj_r.transpose();
  for (Eigen::Index i = 0; i < d; ++i) {
    a.grad.row(i) = coeffs.q[i] * adj_r.transpose();
    a.hess.row(i) = -coeffs.p * adj_r.transpose();
  }
  return a;
}

Eigen::VectorXd evaluate(const PointFn& fn, const Eigen::MatrixXd& points) {
  Eigen::VectorXd out(points.cols());
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    out[j] = fn(std::span<const double>(points.col(j).data(), static_cast<std::size_t>(points.rows())));
  }
  return out;
}

Eigen::VectorXd evaluate(const ScalarField& fn, const Eigen::MatrixXd& points) {
  Eigen::VectorXd out(points.cols());
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    out[j] = fn(std::span<const double>(points.col(j).data(), static_cast<std::size_t>(points.rows())));
  }
  return out;
}

}  // namespace adepinn
