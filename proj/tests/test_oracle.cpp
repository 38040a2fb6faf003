#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "adepinn/oracle.hpp"
#include "adepinn/presets.hpp"

using namespace adepinn;

TEST_CASE("constant solutions are reproduced exactly") {
  const ScalarField c([](auto z) {
    std::remove_cv_t<typename decltype(z)::element_type> r(1.5);
    return r;
  });
  for (BcType right : {BcType::dirichlet, BcType::neumann}) {
    const AdeProblem pr =
        problem_from_exact("const", {0.1, Eigen::VectorXd::Constant(1, 0.3)}, Domain::interval(0.0, 1.0), c,
                           {BcType::dirichlet, right}, 0.0, 1.0);
    const FdGrid g = crank_nicolson_1d(pr, 20, 20);
    CHECK((g.u.array() - 1.5).abs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("second-order convergence on ex3") {
  const Preset ps = preset("ex3");
  double prev = 0.0;
  for (int n : {50, 100, 200}) {
    const FdGrid g = crank_nicolson_1d(ps.problem, n, n);
    const double r = cross_check(ps.problem.exact, g).rel;
    if (prev > 0.0) {
      // REL is a squared norm, so halving h divides it by about 16.
      const double order = 0.5 * std::log2(prev / r);
      CHECK(order > 1.8);
      CHECK(order < 2.2);
    }
    prev = r;
  }
}

TEST_CASE("ex1 at high resolution") {
  const Preset ps = preset("ex1");
  const FdGrid g = crank_nicolson_1d(ps.problem, 2000, 2000);
  const double grid_rel = cross_check(ps.problem.exact, g).rel;
  CHECK(grid_rel < 1e-3);
}

TEST_CASE("cross_check against the grid itself") {
  const Preset ps = preset("ex2");
  const FdGrid g = crank_nicolson_1d(ps.problem, 40, 40);
  CHECK(cross_check(g, g).mse == 0.0);
  // The exact solution sits within the grid's own error of the grid.
  const FdGrid fine = crank_nicolson_1d(ps.problem, 200, 200);
  const double e = cross_check(ps.problem.exact, fine).rel;
  CHECK(e < cross_check(ps.problem.exact, g).rel);
}

TEST_CASE("oracle input validation") {
  CHECK_THROWS_AS(crank_nicolson_1d(preset("ex4").problem, 10, 10), Error);
  CHECK_THROWS_AS(crank_nicolson_1d(preset("ex3").problem, 2, 10), Error);
}
