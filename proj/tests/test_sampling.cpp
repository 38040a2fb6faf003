#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "adepinn/csv.hpp"
#include "adepinn/presets.hpp"
#include "adepinn/sampling.hpp"

using namespace adepinn;

TEST_CASE("interior sampling") {
  SUBCASE("uniform on [0,2] x (0,5]") {
    const SampleBatch b = sample_interior(Domain::interval(0, 2), 0.0, 5.0, 100000, 1);
    CHECK(b.points.rows() == 2);
    CHECK(std::abs(b.points.row(0).mean() - 1.0) < 0.01);
    CHECK(std::abs(b.points.row(1).mean() - 2.5) < 0.02);
    CHECK(b.points.row(1).minCoeff() > 0.0);
    CHECK(b.points.row(1).maxCoeff() <= 5.0);
  }
  SUBCASE("shell membership") {
    const SampleBatch b = sample_interior(Domain::spherical_shell(0.1, 1.0), 0.0, 1.0, 5000, 2);
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      const double r = b.points.col(j).head(3).norm();
      CHECK(r >= 0.1);
      CHECK(r <= 1.0);
    }
  }
  SUBCASE("holes are excluded") {
    const Preset ex6 = preset("ex6");
    const SampleBatch b = sample_interior(ex6.problem.domain, 0.0, 5.0, 3000, 3);
    for (Eigen::Index j = 0; j < b.size(); ++j) CHECK(ex6.problem.domain.contains(b.points.col(j).head(3)));
  }
  SUBCASE("deterministic") {
    const Domain d = preset("ex4").problem.domain;
    CHECK(sample_interior(d, 0, 5, 500, 9).points == sample_interior(d, 0, 5, 500, 9).points);
    CHECK(sample_interior(d, 0, 5, 500, 9).points != sample_interior(d, 0, 5, 500, 10).points);
  }
  SUBCASE("a vanishing domain stalls") {
    const Domain tiny = Domain::porous_box(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1),
                                           {Hole{Eigen::Vector2d(0.5, 0.5), 0.7071}});
    CHECK_THROWS_AS(sample_interior(tiny, 0, 1, 10, 1), Error);
  }
}

TEST_CASE("boundary sampling") {
  SUBCASE("interval end points") {
    const SampleBatch b = sample_boundary(Domain::interval(0, 2), 0, 5, 20000, 1);
    Eigen::Index left = 0;
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      const double x = b.points(0, j);
      CHECK((x == 0.0 || x == 2.0));
      left += x == 0.0;
      CHECK(b.face[static_cast<std::size_t>(j)] == (x == 0.0 ? 0 : 1));
    }
    CHECK(std::abs(static_cast<double>(left) / 20000.0 - 0.5) < 0.02);
  }
  SUBCASE("unit square faces") {
    const SampleBatch b = sample_boundary(Domain::box(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1)), 0, 1, 2000, 2);
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      int on = 0;
      for (int i = 0; i < 2; ++i) on += b.points(i, j) == 0.0 || b.points(i, j) == 1.0;
      CHECK(on == 1);
    }
  }
  SUBCASE("shell radii") {
    const SampleBatch b = sample_boundary(Domain::spherical_shell(0.1, 1.0), 0, 1, 2000, 3);
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      const double r = b.points.col(j).head(3).norm();
      CHECK((std::abs(r - 0.1) < 1e-12 || std::abs(r - 1.0) < 1e-12));
      CHECK(b.normal_axis[static_cast<std::size_t>(j)] == -1);
    }
  }
  SUBCASE("face filter") {
    const SampleBatch b = sample_boundary(Domain::interval(0, 1), 0, 1, 100, 4, {1});
    CHECK(b.points.row(0).minCoeff() == 1.0);
    CHECK_THROWS_AS(sample_boundary(Domain::interval(0, 1), 0, 1, 100, 4, {7}), Error);
  }
}

TEST_CASE("initial sampling") {
  for (const std::string& id : preset_ids()) {
    CAPTURE(id);
    const Preset ps = preset(id);
    const SampleBatch b = sample_initial(ps.problem.domain, 0.0, 500, 5);
    const int d = ps.problem.spatial_dim();
    CHECK(b.points.row(d).cwiseAbs().maxCoeff() == 0.0);
    for (Eigen::Index j = 0; j < b.size(); ++j) CHECK(ps.problem.domain.contains(b.points.col(j).head(d)));
    CHECK(sample_initial(ps.problem.domain, 0.0, 500, 5).points == b.points);
  }
}

TEST_CASE("test slices") {
  SUBCASE("1D grid with corners") {
    const Preset ex1 = preset("ex1");
    const SampleBatch b = test_grid(ex1.problem.domain, 0, 5, ex1.test);
    CHECK(b.size() == 10000);
    bool has_corner = false;
    for (Eigen::Index j = 0; j < b.size(); ++j) has_corner |= b.points(0, j) == 2.0 && b.points(1, j) == 5.0;
    CHECK(has_corner);
    CHECK(b.points.row(0).minCoeff() == 0.0);
    CHECK(b.points.row(1).minCoeff() == 0.0);
  }
  SUBCASE("ex4 slice avoids the holes") {
    const Preset ex4 = preset("ex4");
    const SampleBatch b = test_grid(ex4.problem.domain, 0, 5, ex4.test);
    CHECK(b.size() > 0);
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      CHECK(ex4.problem.domain.contains(b.points.col(j).head(2)));
      CHECK(b.points(2, j) == 2.5);
    }
  }
  SUBCASE("ex7 spherical surface") {
    const Preset ex7 = preset("ex7");
    const SampleBatch b = test_grid(ex7.problem.domain, 0, 1, ex7.test);
    CHECK(b.size() == 8000);
    for (Eigen::Index j = 0; j < b.size(); ++j) CHECK(std::abs(b.points.col(j).head(3).norm() - 0.45) < 1e-12);
  }
  SUBCASE("ex5 grid") {
    const Preset ex5 = preset("ex5");
    CHECK(test_grid(ex5.problem.domain, 0, 1, ex5.test).size() == 16384);
  }
}

TEST_CASE("batch CSV round trip") {
  const SampleBatch b = sample_boundary(Domain::box(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 2)), 0, 1, 50, 6);
  const auto path = std::filesystem::temp_directory_path() / "adepinn_batch_test.csv";
  {
    std::ofstream out(path);
    write_batch_csv(out, b);
  }
  const CsvTable t = read_csv(path.string());
  CHECK(t.header == std::vector<std::string>{"x", "y", "t", "role", "face"});
  REQUIRE(t.rows.size() == 50);
  for (std::size_t j = 0; j < 50; ++j) {
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(parse_double(t.rows[j][i]) == b.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    CHECK(t.rows[j][3] == "boundary");
    CHECK(std::stoi(t.rows[j][4]) == b.face[j]);
  }
  std::filesystem::remove(path);
}
