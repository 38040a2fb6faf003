#include "adepinn/domain.hpp"

#include <cmath>
#include <numbers>

#include "adepinn/error.hpp"

namespace adepinn {

std::string_view to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::interval: return "interval";
    case DomainKind::box: return "box";
    case DomainKind::porous_box: return "porous_box";
    case DomainKind::holed_cube: return "holed_cube";
    case DomainKind::spherical_shell: return "spherical_shell";
  }
  return "unknown";
}

namespace {

void check_bounds(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  if (lo.size() != hi.size() || lo.size() < 1 || lo.size() > 3) {
    throw Error(ErrorKind::invalid_config, "box bounds must have matching dimension 1..3");
  }
  if (!(lo.array() < hi.array()).all()) throw Error(ErrorKind::invalid_config, "box needs lo < hi");
}

void check_holes(const std::vector<Hole>& holes, Eigen::Index dim) {
  for (const Hole& h : holes) {
    if (h.center.size() != dim || !(h.radius > 0.0)) {
      throw Error(ErrorKind::invalid_config, "hole needs a center of the domain dimension and r > 0");
    }
  }
}

Eigen::VectorXd random_direction(Eigen::Index dim, CounterRng& rng) {
  Eigen::VectorXd v(dim);
  double n = 0.0;
  do {
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = rng.normal();
    n = v.norm();
  } while (n < 1e-12);
  return v / n;
}

}  // namespace

Domain Domain::interval(double a, double b) {
  Eigen::VectorXd lo(1), hi(1);
  lo << a;
  hi << b;
  Domain d = box(lo, hi);
  d.kind_ = DomainKind::interval;
  return d;
}

Domain Domain::box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
  check_bounds(lo, hi);
  Domain d;
  d.kind_ = lo.size() == 1 ? DomainKind::interval : DomainKind::box;
  d.lo_ = std::move(lo);
  d.hi_ = std::move(hi);
  return d;
}

Domain Domain::porous_box(Eigen::VectorXd lo, Eigen::VectorXd hi, std::vector<Hole> holes) {
  Domain d = box(std::move(lo), std::move(hi));
  check_holes(holes, d.dim());
  d.kind_ = DomainKind::porous_box;
  d.holes_ = std::move(holes);
  return d;
}

Domain Domain::holed_cube(Eigen::VectorXd lo, Eigen::VectorXd hi, std::vector<Hole> holes) {
  Domain d = porous_box(std::move(lo), std::move(hi), std::move(holes));
  if (d.dim() != 3) throw Error(ErrorKind::invalid_config, "holed_cube is three-dimensional");
  d.kind_ = DomainKind::holed_cube;
  return d;
}

Domain Domain::spherical_shell(double r_inner, double r_outer) {
  if (!(r_inner > 0.0 && r_inner < r_outer)) {
    throw Error(ErrorKind::invalid_config, "spherical shell needs 0 < r1 < r2");
  }
  Domain d;
  d.kind_ = DomainKind::spherical_shell;
  d.lo_ = Eigen::VectorXd::Constant(3, -r_outer);
  d.hi_ = Eigen::VectorXd::Constant(3, r_outer);
  d.r_inner_ = r_inner;
  d.r_outer_ = r_outer;
  return d;
}

bool Domain::contains(const Eigen::Ref<const Eigen::VectorXd>& x, double tol) const {
  if (x.size() != dim()) throw Error(ErrorKind::shape_mismatch, "point dimension != domain dimension");
  if (kind_ == DomainKind::spherical_shell) {
    const double r = x.norm();
    return r >= r_inner_ - tol && r <= r_outer_ + tol;
  }
  if (((x - lo_).array() < -tol).any() || ((x - hi_).array() > tol).any()) return false;
  for (const Hole& h : holes_) {
    if ((x - h.center).norm() < h.radius - tol) return false;
  }
  return true;
}

int Domain::face_count() const {
  if (kind_ == DomainKind::spherical_shell) return 2;
  return 2 * dim() + static_cast<int>(holes_.size());
}

void Domain::check_face(int face) const {
  if (face < 0 || face >= face_count()) throw Error(ErrorKind::no_such_face, "face id out of range");
}

bool Domain::on_face(const Eigen::Ref<const Eigen::VectorXd>& x, int face, double tol) const {
  check_face(face);
  if (kind_ == DomainKind::spherical_shell) {
    return std::abs(x.norm() - (face == 0 ? r_inner_ : r_outer_)) <= tol;
  }
  if (face >= 2 * dim()) {
    const Hole& h = holes_[static_cast<std::size_t>(face - 2 * dim())];
    return std::abs((x - h.center).norm() - h.radius) <= tol;
  }
  const int axis = face / 2;
  const double bound = face % 2 == 0 ? lo_[axis] : hi_[axis];
  if (std::abs(x[axis] - bound) > tol) return false;
  return !(((x - lo_).array() < -tol).any() || ((x - hi_).array() > tol).any());
}

int Domain::face_axis(int face) const {
  check_face(face);
  if (kind_ == DomainKind::spherical_shell || face >= 2 * dim()) return -1;
  return face / 2;
}

int Domain::face_side_sign(int face) const {
  return face_axis(face) < 0 ? 0 : (face % 2 == 0 ? -1 : 1);
}

double Domain::face_measure(int face) const {
  check_face(face);
  const int d = dim();
  auto sphere = [d](double r) {
    return d == 2 ? 2.0 * std::numbers::pi * r : 4.0 * std::numbers::pi * r * r;
  };
  if (kind_ == DomainKind::spherical_shell) return sphere(face == 0 ? r_inner_ : r_outer_);
  if (face >= 2 * d) return sphere(holes_[static_cast<std::size_t>(face - 2 * d)].radius);
  double m = 1.0;
  for (int i = 0; i < d; ++i) {
    if (i != face / 2) m *= hi_[i] - lo_[i];
  }
  return m;
}

Eigen::VectorXd Domain::sample_face(int face, CounterRng& rng) const {
  check_face(face);
  const int d = dim();
  if (kind_ == DomainKind::spherical_shell) {
    return random_direction(3, rng) * (face == 0 ? r_inner_ : r_outer_);
  }
  if (face >= 2 * d) {
    const Hole& h = holes_[static_cast<std::size_t>(face - 2 * d)];
    return h.center + h.radius * random_direction(d, rng);
  }
  Eigen::VectorXd x(d);
  for (int i = 0; i < d; ++i) x[i] = rng.uniform(lo_[i], hi_[i]);
  x[face / 2] = face % 2 == 0 ? lo_[face / 2] : hi_[face / 2];
  return x;
}

Domain Domain::training_domain() const {
  if (kind_ == DomainKind::porous_box || kind_ == DomainKind::holed_cube) return box(lo_, hi_);
  return *this;
}

}  // namespace adepinn
