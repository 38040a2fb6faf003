#pragma once
/**
 * @file oracle.hpp
 * @brief Crank-Nicolson reference solver for one-dimensional problems.
 *
 * Diffusion and advection use central differences with equal weighting of
 * the old and new time levels. Dirichlet rows are pinned to the boundary
 * data; Neumann rows use a ghost node mirrored through the face, e.g.
 * u_{-1} = u_1 - 2 h N at the left end.
 */

#include <ostream>
#include <span>

#include <Eigen/Core>

#include "adepinn/metrics.hpp"
#include "adepinn/pde.hpp"

namespace adepinn {

struct FdGrid {
  int nx = 0;
  int nt = 0;
  Eigen::VectorXd x;  ///< nx + 1 nodes on [a, b]
  Eigen::VectorXd t;  ///< nt + 1 levels on [t0, T]
  Eigen::MatrixXd u;  ///< (nt + 1) x (nx + 1); row j is time level j

  /// Bilinear interpolation at (x, t), clamped to the grid.
  double interpolate(double xq, double tq) const;
  double operator()(std::span<const double> z) const { return interpolate(z[0], z[1]); }
};

FdGrid crank_nicolson_1d(const AdeProblem& problem, int nx, int nt);

/// Predictor samples at every grid node against the grid values.
template <class P>
ErrorSummary cross_check(const P& predictor, const FdGrid& grid) {
  Eigen::VectorXd pred(grid.u.size()), ref(grid.u.size());
  Eigen::Index n = 0;
  for (int j = 0; j <= grid.nt; ++j) {
    for (int i = 0; i <= grid.nx; ++i, ++n) {
      const double z[2] = {grid.x[i], grid.t[j]};
      pred[n] = static_cast<double>(predictor(std::span<const double>(z, 2)));
      ref[n] = grid.u(j, i);
    }
  }
  return summarize(pred, ref);
}

/// CSV with header x,t,u.
void write_grid_csv(std::ostream& out, const FdGrid& grid);

}  // namespace adepinn
