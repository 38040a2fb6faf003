#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "adepinn/csv.hpp"
#include "adepinn/error.hpp"
#include "adepinn/metrics.hpp"
#include "adepinn/sampling.hpp"

using namespace adepinn;

namespace {
Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}
}  // namespace

TEST_CASE("mse") {
  const Eigen::VectorXd u = vec({0.3, -1.0, 2.5, 4.0});
  CHECK(mse(u, u) == 0.0);
  CHECK(mse((u.array() + 0.5).matrix(), u) == 0.25);
  CHECK(mse(vec({1, 2}), vec({0, 0})) == 2.5);
  CHECK_THROWS_AS(mse(vec({1, 2}), vec({1})), Error);
  CHECK_THROWS_AS(mse(Eigen::VectorXd(), Eigen::VectorXd()), Error);
}

TEST_CASE("rel") {
  const Eigen::VectorXd u = vec({0.3, -1.0, 2.5, 4.0});
  CHECK(rel(u, u) == 0.0);
  CHECK(rel(2.0 * u, u) == 1.0);
  const Eigen::VectorXd p = vec({0.1, -0.7, 2.0, 4.4});
  CHECK(rel(4.0 * p, 4.0 * u) == doctest::Approx(rel(p, u)).epsilon(1e-15));
  try {
    rel(u, Eigen::VectorXd::Zero(4));
    FAIL("expected ZeroDenominator");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::zero_denominator);
  }
}

TEST_CASE("summary and pointwise error field") {
  SampleBatch b;
  b.points = Eigen::MatrixXd::Random(2, 7);
  auto exact = [](std::span<const double> z) { return z[0] * z[0] + z[1]; };
  auto shifted = [&](std::span<const double> z) { return exact(z) - 0.25; };
  const ErrorField same = pointwise_error_field(exact, exact, b);
  CHECK(same.abs_error.size() == b.size());
  CHECK(same.abs_error.maxCoeff() == 0.0);
  const ErrorField off = pointwise_error_field(shifted, exact, b);
  CHECK((off.abs_error.array() - 0.25).abs().maxCoeff() < 1e-15);

  const ErrorSummary s = summarize(vec({2, 2}), vec({1, 0}));
  CHECK(s.mse == 2.5);
  CHECK(s.max_abs == 2.0);
  CHECK(s.n_points == 2);
}

TEST_CASE("error-field CSV parses back losslessly") {
  ErrorField f{Eigen::MatrixXd::Random(3, 5), Eigen::VectorXd::Random(5).cwiseAbs()};
  f.points(0, 0) = 0.1 + 0.2;
  const auto path = std::filesystem::temp_directory_path() / "adepinn_field_test.csv";
  {
    std::ofstream out(path);
    write_error_field_csv(out, f);
  }
  const CsvTable t = read_csv(path.string());
  CHECK(t.header == std::vector<std::string>{"x", "y", "t", "abs_error"});
  REQUIRE(t.rows.size() == 5);
  for (std::size_t j = 0; j < 5; ++j) {
    for (Eigen::Index i = 0; i < 3; ++i) CHECK(parse_double(t.rows[j][static_cast<std::size_t>(i)]) == f.points(i, static_cast<Eigen::Index>(j)));
    CHECK(parse_double(t.rows[j][3]) == f.abs_error[static_cast<Eigen::Index>(j)]);
  }
  std::filesystem::remove(path);
}
