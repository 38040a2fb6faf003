#include "adepinn/constraints.hpp"

#include <cmath>
#include <numbers>

#include "adepinn/optim.hpp"
#include "adepinn/rng.hpp"

namespace adepinn {

FieldModel::FieldModel(ScalarField f) : field_(std::move(f)) {}

FieldModel FieldModel::network(ParamStore params) {
  auto net = std::make_shared<const ParamStore>(std::move(params));
  FieldModel m;
  m.net_ = net;
  m.field_ = ScalarField([net](auto z) {
    using S = std::remove_cv_t<typename decltype(z)::element_type>;
    return network_forward<S>(*net, z);
  });
  return m;
}

JetBatch FieldModel::jets(const Eigen::MatrixXd& points, const JetRequest& request) const {
  if (net_) return batch_forward(*net_, points, request);
  return field_jets(field_, points, request);
}

double hard_ansatz_eval(const HardAnsatz& a, std::span<const double> point) { return a(point); }

double min_distance_estimate(const Eigen::Ref<const Eigen::VectorXd>& point, const Eigen::MatrixXd& samples) {
  if (samples.cols() == 0) throw Error(ErrorKind::empty_sample_set, "no boundary samples");
  if (samples.rows() != point.size()) throw Error(ErrorKind::shape_mismatch, "sample dimension mismatch");
  return (samples.colwise() - point).colwise().norm().minCoeff();
}

double indicator_distance(const Eigen::Ref<const Eigen::VectorXd>& point, const VanishingSet& set,
                          const Domain& domain, double tol) {
  const int d = domain.dim();
  if (point.size() != d + 1) throw Error(ErrorKind::shape_mismatch, "point dimension mismatch");
  if (set.initial_time && std::abs(point[d] - set.t0) <= tol) return 0.0;
  for (int f : set.faces) {
    if (domain.on_face(point.head(d), f, tol)) return 0.0;
  }
  return 1.0;
}

namespace {

double volume(const Domain& domain) {
  if (domain.kind() == DomainKind::spherical_shell) {
    const double a = domain.inner_radius();
    const double b = domain.outer_radius();
    return 4.0 / 3.0 * std::numbers::pi * (b * b * b - a * a * a);
  }
  double v = (domain.upper() - domain.lower()).prod();
  for (const Hole& h : domain.holes()) {
    v -= domain.dim() == 2 ? std::numbers::pi * h.radius * h.radius
                           : 4.0 / 3.0 * std::numbers::pi * std::pow(h.radius, 3);
  }
  return v;
}

}  // namespace

Eigen::MatrixXd vanishing_samples(const Domain& domain, const VanishingSet& set, double t_end, Eigen::Index n,
                                  std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::invalid_config, "sample count must be >= 1");
  std::vector<double> cumulative;
  double total = 0.0;
  for (int f : set.faces) {
    total += domain.face_measure(f) * (t_end - set.t0);
    cumulative.push_back(total);
  }
  if (set.initial_time) total += volume(domain);
  if (!(total > 0.0)) throw Error(ErrorKind::empty_sample_set, "vanishing set is empty");

  const int d = domain.dim();
  CounterRng rng(seed, Stream::fit, 1);
  Eigen::MatrixXd pts(d + 1, n);
  Eigen::VectorXd x(d);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double u = rng.uniform() * total;
    std::size_t k = 0;
    while (k < cumulative.size() && u >= cumulative[k]) ++k;
    if (k < cumulative.size()) {
      pts.col(j).head(d) = domain.sample_face(set.faces[k], rng);
      pts(d, j) = rng.uniform(set.t0, t_end);
      continue;
    }
    do {
      for (int i = 0; i < d; ++i) x[i] = rng.uniform(domain.lower()[i], domain.upper()[i]);
    } while (!domain.contains(x));
    pts.col(j).head(d) = x;
    pts(d, j) = set.t0;
  }
  return pts;
}

MlpSpec default_fit_spec(int input_dim) {
  MlpSpec s;
  s.input_dim = input_dim;
  s.hidden_sizes = {20};
  s.hidden_activation = ActivationKind::tanh;
  s.first_layer_activation = ActivationKind::tanh;
  return s;
}

FitResult fit_extension(const Eigen::MatrixXd& points, const Eigen::VectorXd& targets, const MlpSpec& spec,
                        const FitOptions& opts) {
  if (points.cols() == 0) throw Error(ErrorKind::empty_sample_set, "no fitting samples");
  if (targets.size() != points.cols()) throw Error(ErrorKind::length_mismatch, "targets != points");
  if (spec.input_dim != points.rows()) throw Error(ErrorKind::shape_mismatch, "spec input_dim != point dim");
  FitResult r{init_params(spec, opts.seed)};
  // Start the output bias at the target mean so constant targets are met from the first step.
  const LayerBlock& out = r.params.layout().layers(0).back();
  if (out.bias_offset >= 0) r.params.bias(out)[0] = targets.mean() / r.params.layout().combination_weight(0);
  AdamState adam(r.params.size());
  const double n = static_cast<double>(points.cols());
  const JetRequest req = JetRequest::values();
  ForwardTrace trace;
  for (int step = 0; step < opts.steps; ++step) {
    const JetBatch y = batch_forward(r.params, points, req, &trace);
    JetBatch adj = JetBatch::zeros(points.rows(), points.cols());
    adj.value = 2.0 / n * (y.value - targets);
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(r.params.size());
    batch_backward(r.params, trace, adj, grad);
    const double lr = opts.lr * std::pow(0.975, step / 100);
    adam_step(adam, r.params.flat(), grad, lr);
  }
  const JetBatch y = batch_forward(r.params, points, req);
  r.final_loss = (y.value - targets).squaredNorm() / n;
  return r;
}

FitResult fit_distance(const Eigen::MatrixXd& boundary, const Eigen::MatrixXd& interior, const MlpSpec& spec,
                       const FitOptions& opts) {
  if (boundary.cols() == 0 || interior.cols() == 0) {
    throw Error(ErrorKind::empty_sample_set, "distance fit needs boundary and interior samples");
  }
  Eigen::MatrixXd pts(boundary.rows(), boundary.cols() + interior.cols());
  pts << boundary, interior;
  Eigen::VectorXd targets = Eigen::VectorXd::Zero(pts.cols());
  for (Eigen::Index j = 0; j < interior.cols(); ++j) {
    targets[boundary.cols() + j] = min_distance_estimate(interior.col(j), boundary);
  }
  FitResult r = fit_extension(pts, targets, spec, opts);
  r.max_boundary = batch_forward(r.params, boundary, JetRequest::values()).value.cwiseAbs().maxCoeff();
  return r;
}

}  // namespace adepinn
