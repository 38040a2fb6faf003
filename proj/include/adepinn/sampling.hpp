#pragma once
/**
 * @file sampling.hpp
 * @brief Uniform collocation sets and test slices.
 *
 * Every sampler is a pure function of its arguments and seed. Each role
 * draws from its own named stream, so changing the boundary count never
 * moves the interior points.
 */

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include <Eigen/Core>

#include "adepinn/domain.hpp"

namespace adepinn {

enum class SampleRole { interior, boundary, initial, test };

std::string_view to_string(SampleRole role);

struct SampleBatch {
  Eigen::MatrixXd points;        ///< (d+1) x n, time in the last row
  SampleRole role = SampleRole::interior;
  std::vector<int> face;         ///< boundary batches only: face id per point
  std::vector<int> normal_axis;  ///< boundary batches only: -1 for curved faces

  Eigen::Index size() const { return points.cols(); }
};

/// Acceptance floor below which rejection sampling gives up.
inline constexpr double kMinAcceptance = 0.01;
inline constexpr std::uint64_t kStallWindow = 1'000'000;

/// n points uniform on domain x (t0, T].
SampleBatch sample_interior(const Domain& domain, double t0, double t_end, Eigen::Index n,
                            std::uint64_t seed);

/// n points uniform on the (filtered) boundary x [t0, T]; faces drawn in proportion to measure.
SampleBatch sample_boundary(const Domain& domain, double t0, double t_end, Eigen::Index n,
                            std::uint64_t seed, const std::vector<int>& face_filter = {});

/// n points uniform on the domain, all at t = t0.
SampleBatch sample_initial(const Domain& domain, double t0, Eigen::Index n, std::uint64_t seed);

/**
 * Test slice over (x[, y[, z]], t). Coordinates with a value in `fixed` are
 * held; the others range over the bounding box and time range.
 */
struct SliceSpec {
  enum class Mode { grid, random, sphere };
  Mode mode = Mode::grid;
  std::vector<std::optional<double>> fixed;  ///< one entry per input coordinate
  int resolution = 101;                      ///< grid: points per free coordinate
  Eigen::Index count = 10000;                ///< random: number of points
  std::uint64_t seed = 0;                    ///< random: stream seed
  double radius = 1.0;                       ///< sphere: radius; time comes from fixed.back()
  int n_polar = 80;                          ///< sphere: polar angles (cell midpoints)
  int n_azimuth = 100;                       ///< sphere: azimuth angles

  int free_dims() const;
};

/// Points of the slice that lie in the domain (holes removed).
SampleBatch test_grid(const Domain& domain, double t0, double t_end, const SliceSpec& slice);

/// CSV dump with header x[,y[,z]],t,role,face (face is -1 off the boundary).
void write_batch_csv(std::ostream& out, const SampleBatch& batch);

}  // namespace adepinn
