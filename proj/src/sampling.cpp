#include "adepinn/sampling.hpp"

#include <cmath>
#include <numbers>

#include "adepinn/csv.hpp"
#include "adepinn/error.hpp"
#include "adepinn/rng.hpp"

namespace adepinn {

std::string_view to_string(SampleRole role) {
  switch (role) {
    case SampleRole::interior: return "interior";
    case SampleRole::boundary: return "boundary";
    case SampleRole::initial: return "initial";
    case SampleRole::test: return "test";
  }
  return "unknown";
}

namespace {

void require_count(Eigen::Index n) {
  if (n < 1) throw Error(ErrorKind::invalid_config, "sample count must be >= 1");
}

/// Rejection-samples n spatial points into rows [0, d) of `out`.
void fill_spatial(const Domain& domain, CounterRng& rng, Eigen::MatrixXd& out) {
  const int d = domain.dim();
  const Eigen::VectorXd& lo = domain.lower();
  const Eigen::VectorXd& hi = domain.upper();
  Eigen::VectorXd x(d);
  std::uint64_t draws = 0;
  std::uint64_t accepted = 0;
  for (Eigen::Index j = 0; j < out.cols();) {
    for (int i = 0; i < d; ++i) x[i] = rng.uniform(lo[i], hi[i]);
    ++draws;
    if (domain.contains(x)) {
      out.col(j).head(d) = x;
      ++accepted;
      ++j;
    }
    if (draws >= kStallWindow &&
        static_cast<double>(accepted) < kMinAcceptance * static_cast<double>(draws)) {
      throw Error(ErrorKind::rejection_stall, "acceptance rate fell below 1%");
    }
  }
}

}  // namespace

SampleBatch sample_interior(const Domain& domain, double t0, double t_end, Eigen::Index n,
                            std::uint64_t seed) {
  require_count(n);
  const int d = domain.dim();
  CounterRng rng(seed, Stream::interior);
  SampleBatch b;
  b.role = SampleRole::interior;
  b.points.resize(d + 1, n);
  fill_spatial(domain, rng, b.points);
  // t_end - (t_end - t0) u lands in (t0, t_end] for u in [0, 1).
  for (Eigen::Index j = 0; j < n; ++j) b.points(d, j) = t_end - (t_end - t0) * rng.uniform();
  return b;
}

SampleBatch sample_boundary(const Domain& domain, double t0, double t_end, Eigen::Index n,
                            std::uint64_t seed, const std::vector<int>& face_filter) {
  require_count(n);
  std::vector<int> faces = face_filter;
  if (faces.empty()) {
    for (int f = 0; f < domain.face_count(); ++f) faces.push_back(f);
  }
  std::vector<double> cumulative;
  double total = 0.0;
  for (int f : faces) {
    if (f < 0 || f >= domain.face_count()) throw Error(ErrorKind::no_such_face, "unknown face id");
    total += domain.face_measure(f);
    cumulative.push_back(total);
  }
  const int d = domain.dim();
  CounterRng rng(seed, Stream::boundary);
  SampleBatch b;
  b.role = SampleRole::boundary;
  b.points.resize(d + 1, n);
  b.face.resize(static_cast<std::size_t>(n));
  b.normal_axis.resize(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    const double u = rng.uniform() * total;
    std::size_t k = 0;
    while (k + 1 < cumulative.size() && u >= cumulative[k]) ++k;
    const int f = faces[k];
    b.points.col(j).head(d) = domain.sample_face(f, rng);
    b.points(d, j) = rng.uniform(t0, t_end);
    b.face[static_cast<std::size_t>(j)] = f;
    b.normal_axis[static_cast<std::size_t>(j)] = domain.face_axis(f);
  }
  return b;
}

SampleBatch sample_initial(const Domain& domain, double t0, Eigen::Index n, std::uint64_t seed) {
  require_count(n);
  CounterRng rng(seed, Stream::initial);
  SampleBatch b;
  b.role = SampleRole::initial;
  b.points.resize(domain.dim() + 1, n);
  fill_spatial(domain, rng, b.points);
  b.points.row(domain.dim()).setConstant(t0);
  return b;
}

int SliceSpec::free_dims() const {
  int n = 0;
  for (const auto& f : fixed) n += f.has_value() ? 0 : 1;
  return n;
}

SampleBatch test_grid(const Domain& domain, double t0, double t_end, const SliceSpec& slice) {
  const int d = domain.dim();
  const int k = d + 1;
  if (static_cast<int>(slice.fixed.size()) != k) {
    throw Error(ErrorKind::invalid_config, "slice needs one entry per input coordinate");
  }
  Eigen::VectorXd lo(k), hi(k);
  lo << domain.lower(), t0;
  hi << domain.upper(), t_end;

  std::vector<Eigen::VectorXd> pts;
  Eigen::VectorXd z(k);
  auto keep = [&](const Eigen::VectorXd& p) {
    if (domain.contains(p.head(d), 1e-12)) pts.push_back(p);
  };

  switch (slice.mode) {
    case SliceSpec::Mode::grid: {
      if (slice.free_dims() > 2) throw Error(ErrorKind::invalid_config, "slice leaves > 2 free coordinates");
      if (slice.resolution < 2) throw Error(ErrorKind::invalid_config, "grid resolution must be >= 2");
      std::vector<int> free;
      for (int i = 0; i < k; ++i) {
        if (slice.fixed[static_cast<std::size_t>(i)]) {
          z[i] = *slice.fixed[static_cast<std::size_t>(i)];
        } else {
          free.push_back(i);
        }
      }
      const int r = slice.resolution;
      const auto coord = [&](int axis, int idx) {
        return idx == r - 1 ? hi[axis] : lo[axis] + (hi[axis] - lo[axis]) * idx / (r - 1);
      };
      const int outer = free.size() > 1 ? r : 1;
      const int inner = free.empty() ? 1 : r;
      for (int a = 0; a < outer; ++a) {
        for (int b = 0; b < inner; ++b) {
          if (free.size() > 1) z[free[1]] = coord(free[1], a);
          if (!free.empty()) z[free[0]] = coord(free[0], b);
          keep(z);
        }
      }
      break;
    }
    case SliceSpec::Mode::random: {
      if (slice.count < 1) throw Error(ErrorKind::invalid_config, "random slice needs count >= 1");
      CounterRng rng(slice.seed, Stream::test);
      std::uint64_t draws = 0;
      while (static_cast<Eigen::Index>(pts.size()) < slice.count) {
        for (int i = 0; i < k; ++i) {
          const auto& f = slice.fixed[static_cast<std::size_t>(i)];
          z[i] = f ? *f : rng.uniform(lo[i], hi[i]);
        }
        keep(z);
        if (++draws >= kStallWindow &&
            static_cast<double>(pts.size()) < kMinAcceptance * static_cast<double>(draws)) {
          throw Error(ErrorKind::rejection_stall, "test slice acceptance fell below 1%");
        }
      }
      break;
    }
    case SliceSpec::Mode::sphere: {
      if (d != 3 || !slice.fixed.back()) {
        throw Error(ErrorKind::invalid_config, "sphere slice needs a 3D domain and a fixed time");
      }
      z[3] = *slice.fixed.back();
      for (int a = 0; a < slice.n_polar; ++a) {
        const double theta = std::numbers::pi * (a + 0.5) / slice.n_polar;
        for (int b = 0; b < slice.n_azimuth; ++b) {
          const double phi = 2.0 * std::numbers::pi * b / slice.n_azimuth;
          z[0] = slice.radius * std::sin(theta) * std::cos(phi);
          z[1] = slice.radius * std::sin(theta) * std::sin(phi);
          z[2] = slice.radius * std::cos(theta);
          keep(z);
        }
      }
      break;
    }
  }

  SampleBatch b;
  b.role = SampleRole::test;
  b.points.resize(k, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t j = 0; j < pts.size(); ++j) b.points.col(static_cast<Eigen::Index>(j)) = pts[j];
  return b;
}

void write_batch_csv(std::ostream& out, const SampleBatch& batch) {
  const Eigen::Index k = batch.points.rows();
  out << coordinate_header(static_cast<int>(k)) << ",role,face\n";
  for (Eigen::Index j = 0; j < batch.size(); ++j) {
    for (Eigen::Index i = 0; i < k; ++i) out << format_double(batch.points(i, j)) << ',';
    const int face = batch.face.empty() ? -1 : batch.face[static_cast<std::size_t>(j)];
    out << to_string(batch.role) << ',' << face << '\n';
  }
}

}  // namespace adepinn
