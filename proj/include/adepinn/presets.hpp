#pragma once
/**
 * @file presets.hpp
 * @brief The seven benchmark problems and the registry of named solution
 *        expressions used to build custom problems.
 */

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adepinn/constraints.hpp"
#include "adepinn/pde.hpp"
#include "adepinn/sampling.hpp"

namespace adepinn {

struct PresetOptions {
  /// Use the distance function exactly as printed for the example, even where it
  /// fails to vanish on the constrained set (ex4, ex5).
  bool literal_distance = false;
  /// Use the printed extension function (sin(x) for ex2/ex3, the initial data for ex7).
  bool literal_extension = false;
  std::optional<Eigen::Index> test_count;  ///< random test slices
  std::optional<int> test_resolution;      ///< grid test slices
  std::uint64_t test_seed = 12345;
};

struct Preset {
  AdeProblem problem;
  DistanceFn distance;
  ExtensionFn extension;
  bool distance_has_time_factor = true;  ///< D carries a factor (t - t0)
  SliceSpec test;
  std::string description;
};

Preset preset(std::string_view id, const PresetOptions& opts = {});
const std::vector<std::string>& preset_ids();

/**
 * Registered closed-form solutions, selected by name with numeric parameters:
 *   constant            [c]
 *   decay_modes_1d      [alpha, k1, amp, k2]  e^{-alpha t}(sin(k1 pi x) + amp sin(k2 pi x))
 *   decay_modes_2d      [alpha, k1, amp, k2]  e^{-alpha t}(prod sin(k1 pi x_i) + amp prod sin(k2 pi x_i))
 *   decay_modes_3d      [alpha, k1, amp, k2]  same in three dimensions
 *   decay_bubble_2d     [alpha, L]            e^{-alpha t} x y (L - x)(L - y)
 * Unknown names raise UnsupportedPrimitive.
 */
ScalarField named_expression(std::string_view name, const std::vector<double>& params);
const std::vector<std::string>& expression_names();

/// G(x, t) = u*(x, t0): matches the initial data exactly.
ScalarField initial_lift(const ScalarField& exact, double t0);

/// (t - t0)/(T - t0) times the product of normalized distances to the listed box faces.
ScalarField box_distance(const Domain& domain, const std::vector<int>& faces, double t0, double t_end);

}  // namespace adepinn
