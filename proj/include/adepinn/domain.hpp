#pragma once
/**
 * @file domain.hpp
 * @brief Spatial domains: intervals, boxes, boxes with holes, spherical shells.
 *
 * Faces are numbered per kind:
 *   - box (and interval): face 2*axis + side, side 0 at the lower bound;
 *   - porous_box / holed_cube: the 2d box faces, then one face per hole;
 *   - spherical_shell: face 0 is the inner sphere, face 1 the outer one.
 */

#include <string>
#include <vector>

#include <Eigen/Core>

#include "adepinn/rng.hpp"

namespace adepinn {

enum class DomainKind { interval, box, porous_box, holed_cube, spherical_shell };

std::string_view to_string(DomainKind kind);

/// Disc (2D) or ball (3D) removed from a box.
struct Hole {
  Eigen::VectorXd center;
  double radius = 0.0;
};

class Domain {
 public:
  static Domain interval(double a, double b);
  static Domain box(Eigen::VectorXd lo, Eigen::VectorXd hi);
  static Domain porous_box(Eigen::VectorXd lo, Eigen::VectorXd hi, std::vector<Hole> holes);
  static Domain holed_cube(Eigen::VectorXd lo, Eigen::VectorXd hi, std::vector<Hole> holes);
  static Domain spherical_shell(double r_inner, double r_outer);

  DomainKind kind() const { return kind_; }
  int dim() const { return static_cast<int>(lo_.size()); }
  const Eigen::VectorXd& lower() const { return lo_; }  ///< bounding box
  const Eigen::VectorXd& upper() const { return hi_; }
  const std::vector<Hole>& holes() const { return holes_; }
  double inner_radius() const { return r_inner_; }
  double outer_radius() const { return r_outer_; }

  /// Closed-set membership with tolerance `tol` on every constraint.
  bool contains(const Eigen::Ref<const Eigen::VectorXd>& x, double tol = 0.0) const;

  int face_count() const;
  bool on_face(const Eigen::Ref<const Eigen::VectorXd>& x, int face, double tol = 1e-9) const;
  /// Coordinate axis normal to a planar box face, -1 for curved faces.
  int face_axis(int face) const;
  /// Outward normal sign along `face_axis` (+1 upper side, -1 lower side), 0 for curved faces.
  int face_side_sign(int face) const;
  /// Length / area of a face (1 for the end points of an interval).
  double face_measure(int face) const;
  /// Uniform point on one face.
  Eigen::VectorXd sample_face(int face, CounterRng& rng) const;

  /// Domain used for collocation: boxes with holes train on their bounding box.
  Domain training_domain() const;

 private:
  DomainKind kind_ = DomainKind::interval;
  Eigen::VectorXd lo_, hi_;
  std::vector<Hole> holes_;
  double r_inner_ = 0.0;
  double r_outer_ = 0.0;

  void check_face(int face) const;
};

}  // namespace adepinn
