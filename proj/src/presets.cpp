#include "adepinn/presets.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace adepinn {

namespace {

constexpr double kPi = std::numbers::pi;

template <class Z>
using elem_t = std::remove_cv_t<typename Z::element_type>;

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

void require_params(std::string_view name, const std::vector<double>& p, std::size_t n) {
  if (p.size() != n) {
    throw Error(ErrorKind::invalid_config,
                std::string(name) + " expects " + std::to_string(n) + " parameters");
  }
}

/// e^{-alpha t}(prod_i sin(k1 pi x_i) + amp prod_i sin(k2 pi x_i)) over `dim` spatial axes.
ScalarField decay_modes(int dim, double alpha, double k1, double amp, double k2) {
  return ScalarField([=](auto z) {
    using S = elem_t<decltype(z)>;
    using std::exp;
    using std::sin;
    S low(1.0), high(1.0);
    for (int i = 0; i < dim; ++i) {
      low = low * sin(z[static_cast<std::size_t>(i)] * (k1 * kPi));
      if (amp != 0.0) high = high * sin(z[static_cast<std::size_t>(i)] * (k2 * kPi));
    }
    S r = exp(z[static_cast<std::size_t>(dim)] * (-alpha)) * (amp != 0.0 ? low + high * amp : low);
    return r;
  });
}

std::vector<BcType> all_faces(const Domain& d, BcType type) {
  return std::vector<BcType>(static_cast<std::size_t>(d.face_count()), type);
}

std::vector<int> face_range(int n) {
  std::vector<int> f;
  for (int i = 0; i < n; ++i) f.push_back(i);
  return f;
}

SliceSpec grid_slice(int k, int resolution, std::vector<std::optional<double>> fixed = {}) {
  SliceSpec s;
  s.mode = SliceSpec::Mode::grid;
  s.fixed = fixed.empty() ? std::vector<std::optional<double>>(static_cast<std::size_t>(k)) : std::move(fixed);
  s.resolution = resolution;
  return s;
}

SliceSpec random_slice(Eigen::Index count, std::uint64_t seed, std::vector<std::optional<double>> fixed) {
  SliceSpec s;
  s.mode = SliceSpec::Mode::random;
  s.fixed = std::move(fixed);
  s.count = count;
  s.seed = seed;
  return s;
}

void apply_test_overrides(SliceSpec& s, const PresetOptions& o) {
  if (o.test_count) s.count = *o.test_count;
  if (o.test_resolution) s.resolution = *o.test_resolution;
}

/// Shared shape of the three one-dimensional examples.
Preset one_dim(std::string id, double a, double b, double t_end, double p, double q, ScalarField exact,
               std::vector<BcType> faces, ScalarField distance, const PresetOptions& o) {
  Preset ps;
  ps.problem = problem_from_exact(std::move(id), {p, vec({q})}, Domain::interval(a, b), exact, faces, 0.0, t_end);
  ps.distance.eval = std::move(distance);
  ps.distance.vanishing = {ps.problem.bc.faces_of(BcType::dirichlet), true, 0.0};
  ps.extension.eval = initial_lift(exact, 0.0);
  ps.test = grid_slice(2, 100);
  apply_test_overrides(ps.test, o);
  return ps;
}

ScalarField sin_x() {
  return ScalarField([](auto z) {
    using std::sin;
    elem_t<decltype(z)> r = sin(z[0]);
    return r;
  });
}

Preset make_ex1(const PresetOptions& o) {
  const ScalarField exact = decay_modes(1, 0.1, 1.0, 0.1, 30.0);
  const ScalarField d([](auto z) {
    elem_t<decltype(z)> r = z[0] * (z[0] - 2.0) * z[1] / 20.0;
    return r;
  });
  Preset ps = one_dim("ex1", 0.0, 2.0, 5.0, 0.02, 0.01, exact, {BcType::dirichlet, BcType::dirichlet}, d, o);
  ps.description = "1D Dirichlet, high-frequency mode beta = 30";
  return ps;
}

ScalarField unit_interval_distance() {
  return ScalarField([](auto z) {
    elem_t<decltype(z)> r = z[0] * (1.0 - z[0]) * z[1];
    return r;
  });
}

Preset make_ex2(const PresetOptions& o) {
  const ScalarField exact = decay_modes(1, 0.25, 1.0, 0.1, 10.0);
  Preset ps = one_dim("ex2", 0.0, 1.0, 1.0, 0.002, 0.001, exact, {BcType::neumann, BcType::neumann},
                      unit_interval_distance(), o);
  if (o.literal_extension) ps.extension.eval = sin_x();
  ps.description = "1D Neumann, multiscale modes pi and 10 pi";
  return ps;
}

Preset make_ex3(const PresetOptions& o) {
  const ScalarField exact = decay_modes(1, 0.25, 2.0, 0.0, 0.0);
  Preset ps = one_dim("ex3", 0.0, 1.0, 1.0, 0.002, 0.001, exact, {BcType::dirichlet, BcType::neumann},
                      unit_interval_distance(), o);
  if (o.literal_extension) ps.extension.eval = sin_x();
  ps.description = "1D mixed: Dirichlet left, Neumann right, low frequency";
  return ps;
}

Preset make_ex4(const PresetOptions& o) {
  std::vector<Hole> holes{{vec({2.0, 2.0}), 0.6},
                          {vec({1.0, 1.0}), 0.3},
                          {vec({1.0, 3.0}), 0.3},
                          {vec({3.0, 1.0}), 0.3},
                          {vec({3.0, 3.0}), 0.3}};
  const Domain dom = Domain::porous_box(vec({0.0, 0.0}), vec({4.0, 4.0}), std::move(holes));
  const ScalarField exact = named_expression("decay_bubble_2d", {0.25, 4.0});
  Preset ps;
  ps.problem = problem_from_exact("ex4", {1.0, vec({4.0, 4.0})}, dom, exact, all_faces(dom, BcType::dirichlet), 0.0,
                                  5.0);
  const double w = o.literal_distance ? 0.25 : kPi / 4.0;
  ps.distance.eval = ScalarField([w](auto z) {
    using std::sin;
    elem_t<decltype(z)> r = z[2] / 5.0 * sin(z[0] * w) * sin(z[1] * w);
    return r;
  });
  ps.distance.vanishing = {face_range(4), true, 0.0};
  ps.extension.eval = ScalarField([](auto z) {
    elem_t<decltype(z)> r = (z[0] * 4.0 - z[0] * z[0]) * (z[1] * 4.0 - z[1] * z[1]);
    return r;
  });
  ps.test = random_slice(17706, o.test_seed, {std::nullopt, std::nullopt, 2.5});
  apply_test_overrides(ps.test, o);
  ps.description = "2D porous square, Dirichlet; trained on the bounding box";
  return ps;
}

Preset make_ex5(const PresetOptions& o) {
  const Domain dom = Domain::box(vec({0.0, 0.0}), vec({1.0, 1.0}));
  const ScalarField exact = decay_modes(2, 0.25, 1.0, 0.1, 10.0);
  Preset ps;
  ps.problem = problem_from_exact("ex5", {1.0, vec({4.0, 4.0})}, dom, exact, all_faces(dom, BcType::neumann), 0.0,
                                  1.0);
  if (o.literal_distance) {
    ps.distance.eval = ScalarField([](auto z) {
      elem_t<decltype(z)> r = 1.0 - z[2];
      return r;
    });
    ps.distance_has_time_factor = false;
  } else {
    ps.distance.eval = ScalarField([](auto z) {
      elem_t<decltype(z)> r = z[2];
      return r;
    });
  }
  ps.distance.vanishing = {{}, true, 0.0};
  ps.extension.eval = initial_lift(exact, 0.0);
  ps.test = grid_slice(3, 128, {std::nullopt, std::nullopt, 0.5});
  apply_test_overrides(ps.test, o);
  ps.description = "2D Neumann square, multiscale modes pi and 10 pi";
  return ps;
}

Preset make_ex6(const PresetOptions& o) {
  std::vector<Hole> holes{{vec({0.5, 0.5, 0.5}), 0.2}};
  for (double x : {0.25, 0.75}) {
    for (double y : {0.25, 0.75}) {
      for (double z : {0.25, 0.75}) holes.push_back({vec({x, y, z}), 0.1});
    }
  }
  const Domain dom = Domain::holed_cube(vec({0.0, 0.0, 0.0}), vec({1.0, 1.0, 1.0}), std::move(holes));
  const ScalarField exact = decay_modes(3, 0.25, 1.0, 0.0, 0.0);
  Preset ps;
  ps.problem = problem_from_exact("ex6", {1.0, vec({1.0, 1.0, 1.0})}, dom, exact,
                                  all_faces(dom, BcType::dirichlet), 0.0, 5.0);
  ps.distance.eval = ScalarField([](auto z) {
    elem_t<decltype(z)> r = z[0] * z[1] * z[2] * (1.0 - z[0]) * (1.0 - z[1]) * (1.0 - z[2]) * z[3] / 5.0;
    return r;
  });
  ps.distance.vanishing = {face_range(6), true, 0.0};
  ps.extension.eval = initial_lift(exact, 0.0);
  ps.test = random_slice(80000, o.test_seed, {std::nullopt, std::nullopt, 0.5, 0.5});
  apply_test_overrides(ps.test, o);
  ps.description = "3D unit cube with nine spherical holes, Dirichlet";
  return ps;
}

Preset make_ex7(const PresetOptions& o) {
  constexpr double r1 = 0.1;
  constexpr double r2 = 1.0;
  const Domain dom = Domain::spherical_shell(r1, r2);
  const ScalarField exact = decay_modes(3, 0.25, 1.0, 0.1, 10.0);
  Preset ps;
  ps.problem = problem_from_exact("ex7", {1.0, vec({1.0, 1.0, 1.0})}, dom, exact,
                                  all_faces(dom, BcType::dirichlet), 0.0, 1.0);
  ps.distance.eval = ScalarField([](auto z) {
    using std::sqrt;
    using S = elem_t<decltype(z)>;
    const S r = sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]);
    S out = (r - r1) * (r2 - r) / ((r2 - r1) * (r2 - r1)) * z[3];
    return out;
  });
  ps.distance.vanishing = {{0, 1}, true, 0.0};
  if (o.literal_extension) {
    ps.extension.eval = initial_lift(exact, 0.0);
  } else {
    // h(x) plus radial blends of the boundary data's drift from h on each sphere.
    ps.extension.eval = ScalarField([exact](auto z) {
      using std::sqrt;
      using S = elem_t<decltype(z)>;
      const S r = sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]);
      auto at = [&](double rho, bool initial) {
        std::array<S, 4> w{z[0] * rho / r, z[1] * rho / r, z[2] * rho / r, initial ? S(0.0) : z[3]};
        return exact(std::span<const S>(w));
      };
      std::array<S, 4> h0{z[0], z[1], z[2], S(0.0)};
      const S w_in = (r2 - r) / (r2 - r1);
      const S w_out = (r - r1) / (r2 - r1);
      S out = exact(std::span<const S>(h0)) + w_in * (at(r1, false) - at(r1, true)) +
              w_out * (at(r2, false) - at(r2, true));
      return out;
    });
  }
  ps.test.mode = SliceSpec::Mode::sphere;
  ps.test.fixed = {std::nullopt, std::nullopt, std::nullopt, 0.5};
  ps.test.radius = 0.45;
  ps.test.n_polar = 80;
  ps.test.n_azimuth = 100;
  ps.description = "3D spherical shell r in [0.1, 1], Dirichlet, modes pi and 10 pi";
  return ps;
}

}  // namespace

const std::vector<std::string>& preset_ids() {
  static const std::vector<std::string> ids{"ex1", "ex2", "ex3", "ex4", "ex5", "ex6", "ex7"};
  return ids;
}

Preset preset(std::string_view id, const PresetOptions& opts) {
  if (id == "ex1") return make_ex1(opts);
  if (id == "ex2") return make_ex2(opts);
  if (id == "ex3") return make_ex3(opts);
  if (id == "ex4") return make_ex4(opts);
  if (id == "ex5") return make_ex5(opts);
  if (id == "ex6") return make_ex6(opts);
  if (id == "ex7") return make_ex7(opts);
  throw Error(ErrorKind::unknown_preset, "no preset named '" + std::string(id) + "'");
}

const std::vector<std::string>& expression_names() {
  static const std::vector<std::string> names{"constant", "decay_modes_1d", "decay_modes_2d", "decay_modes_3d",
                                              "decay_bubble_2d"};
  return names;
}

ScalarField named_expression(std::string_view name, const std::vector<double>& p) {
  if (name == "constant") {
    require_params(name, p, 1);
    const double c = p[0];
    return ScalarField([c](auto z) {
      elem_t<decltype(z)> v(c);
      return v;
    });
  }
  for (int dim = 1; dim <= 3; ++dim) {
    if (name == "decay_modes_" + std::to_string(dim) + "d") {
      require_params(name, p, 4);
      return decay_modes(dim, p[0], p[1], p[2], p[3]);
    }
  }
  if (name == "decay_bubble_2d") {
    require_params(name, p, 2);
    const double alpha = p[0];
    const double len = p[1];
    return ScalarField([alpha, len](auto z) {
      using std::exp;
      elem_t<decltype(z)> r = exp(z[2] * (-alpha)) * z[0] * z[1] * (len - z[0]) * (len - z[1]);
      return r;
    });
  }
  throw Error(ErrorKind::unsupported_primitive, "no registered expression '" + std::string(name) + "'");
}

ScalarField initial_lift(const ScalarField& exact, double t0) {
  return ScalarField([exact, t0](auto z) {
    using S = elem_t<decltype(z)>;
    std::vector<S> w(z.begin(), z.end());
    w.back() = S(t0);
    return exact(std::span<const S>(w));
  });
}

ScalarField box_distance(const Domain& domain, const std::vector<int>& faces, double t0, double t_end) {
  struct Factor {
    int axis;
    double bound;
    double sign;
    double scale;
  };
  std::vector<Factor> fs;
  for (int f : faces) {
    const int axis = domain.face_axis(f);
    if (axis < 0) throw Error(ErrorKind::invalid_config, "box_distance needs planar faces");
    const double ext = domain.upper()[axis] - domain.lower()[axis];
    const bool lower = f % 2 == 0;
    fs.push_back({axis, lower ? domain.lower()[axis] : domain.upper()[axis], lower ? 1.0 : -1.0, 1.0 / ext});
  }
  const double span_t = t_end - t0;
  return ScalarField([fs, t0, span_t](auto z) {
    using S = elem_t<decltype(z)>;
    S r = (z.back() - t0) / span_t;
    for (const Factor& f : fs) r = r * ((z[static_cast<std::size_t>(f.axis)] - f.bound) * (f.sign * f.scale));
    return r;
  });
}

}  // namespace adepinn
