#include "adepinn/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "adepinn/csv.hpp"

namespace adepinn {

namespace {

/// Solves a tridiagonal system in place of `rhs` (sub, diag, sup indexed by row).
void thomas(const Eigen::VectorXd& sub, Eigen::VectorXd diag, const Eigen::VectorXd& sup, Eigen::VectorXd& rhs) {
  const Eigen::Index n = diag.size();
  const double scale = diag.cwiseAbs().maxCoeff();
  auto check = [scale](double pivot) {
    if (!(std::abs(pivot) > 1e-14 * scale)) throw Error(ErrorKind::singular_system, "zero pivot in tridiagonal solve");
  };
  check(diag[0]);
  for (Eigen::Index i = 1; i < n; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
    check(diag[i]);
  }
  rhs[n - 1] /= diag[n - 1];
  for (Eigen::Index i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

}  // namespace

double FdGrid::interpolate(double xq, double tq) const {
  auto locate = [](const Eigen::VectorXd& g, double v, double& w) {
    const double c = std::clamp(v, g[0], g[g.size() - 1]);
    const double h = (g[g.size() - 1] - g[0]) / static_cast<double>(g.size() - 1);
    const Eigen::Index i = std::min<Eigen::Index>(static_cast<Eigen::Index>((c - g[0]) / h), g.size() - 2);
    w = (c - g[i]) / (g[i + 1] - g[i]);
    return i;
  };
  double wx = 0.0, wt = 0.0;
  const Eigen::Index i = locate(x, xq, wx);
  const Eigen::Index j = locate(t, tq, wt);
  return (1 - wt) * ((1 - wx) * u(j, i) + wx * u(j, i + 1)) + wt * ((1 - wx) * u(j + 1, i) + wx * u(j + 1, i + 1));
}

FdGrid crank_nicolson_1d(const AdeProblem& problem, int nx, int nt) {
  if (problem.spatial_dim() != 1) throw Error(ErrorKind::invalid_config, "oracle handles 1D problems only");
  if (nx < 3 || nt < 3) throw Error(ErrorKind::invalid_config, "oracle needs nx, nt >= 3");
  const double p = problem.coeffs.p;
  const double q = problem.coeffs.q[0];
  if (!(p > 0.0)) throw Error(ErrorKind::invalid_config, "oracle needs p > 0");

  FdGrid g;
  g.nx = nx;
  g.nt = nt;
  const double a = problem.domain.lower()[0];
  const double b = problem.domain.upper()[0];
  g.x = Eigen::VectorXd::LinSpaced(nx + 1, a, b);
  g.t = Eigen::VectorXd::LinSpaced(nt + 1, problem.bc.t0, problem.bc.t_end);
  g.u.resize(nt + 1, nx + 1);
  const double h = (b - a) / nx;
  const double k = (problem.bc.t_end - problem.bc.t0) / nt;

  auto at = [](const PointFn& fn, double x, double t) {
    const double z[2] = {x, t};
    return fn(std::span<const double>(z, 2));
  };
  for (int i = 0; i <= nx; ++i) g.u(0, i) = at(problem.bc.initial, g.x[i], g.t[0]);

  // L u_i = lo u_{i-1} + mid u_i + hi u_{i+1}
  const double lo = p / (h * h) + q / (2 * h);
  const double mid = -2 * p / (h * h);
  const double hi = p / (h * h) - q / (2 * h);
  const FaceCondition& left = problem.bc.faces[0];
  const FaceCondition& right = problem.bc.faces[1];

  const int n = nx + 1;
  Eigen::VectorXd sub = Eigen::VectorXd::Zero(n), diag(n), sup = Eigen::VectorXd::Zero(n), rhs(n);
  Eigen::VectorXd f_old(n), f_new(n);
  for (int i = 0; i <= nx; ++i) f_old[i] = at(problem.forcing, g.x[i], g.t[0]);

  for (int j = 0; j < nt; ++j) {
    const double t_old = g.t[j];
    const double t_new = g.t[j + 1];
    for (int i = 0; i <= nx; ++i) f_new[i] = at(problem.forcing, g.x[i], t_new);
    const Eigen::VectorXd old = g.u.row(j).transpose();

    // Operator applied to the old level, with ghost values on Neumann ends.
    Eigen::VectorXd lu(n);
    for (int i = 1; i < nx; ++i) lu[i] = lo * old[i - 1] + mid * old[i] + hi * old[i + 1];
    const double n_left_old = left.type == BcType::neumann ? at(left.data, a, t_old) : 0.0;
    const double n_right_old = right.type == BcType::neumann ? at(right.data, b, t_old) : 0.0;
    lu[0] = mid * old[0] + (lo + hi) * old[1] - 2 * h * lo * n_left_old;
    lu[nx] = (lo + hi) * old[nx - 1] + mid * old[nx] + 2 * h * hi * n_right_old;

    for (int i = 0; i <= nx; ++i) {
      sub[i] = -0.5 * k * lo;
      diag[i] = 1 - 0.5 * k * mid;
      sup[i] = -0.5 * k * hi;
      rhs[i] = old[i] + 0.5 * k * (lu[i] + f_old[i] + f_new[i]);
    }
    if (left.type == BcType::dirichlet) {
      diag[0] = 1;
      sup[0] = 0;
      rhs[0] = at(left.data, a, t_new);
    } else {
      sup[0] = -0.5 * k * (lo + hi);
      rhs[0] += 0.5 * k * (-2 * h * lo * at(left.data, a, t_new));
    }
    if (right.type == BcType::dirichlet) {
      diag[nx] = 1;
      sub[nx] = 0;
      rhs[nx] = at(right.data, b, t_new);
    } else {
      sub[nx] = -0.5 * k * (lo + hi);
      rhs[nx] += 0.5 * k * (2 * h * hi * at(right.data, b, t_new));
    }
    thomas(sub, diag, sup, rhs);
    if (!rhs.allFinite()) throw Error(ErrorKind::non_finite, "oracle solution is not finite");
    g.u.row(j + 1) = rhs.transpose();
    f_old = f_new;
  }
  return g;
}

void write_grid_csv(std::ostream& out, const FdGrid& grid) {
  out << "x,t,u\n";
  for (int j = 0; j <= grid.nt; ++j) {
    for (int i = 0; i <= grid.nx; ++i) {
      out << format_double(grid.x[i]) << ',' << format_double(grid.t[j]) << ',' << format_double(grid.u(j, i))
          << '\n';
    }
  }
}

}  // namespace adepinn
