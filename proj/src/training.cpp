#include "adepinn/training.hpp"

#include <cmath>
#include <ostream>

#include "adepinn/csv.hpp"

namespace adepinn {

ModelKind parse_model(std::string_view name) {
  if (name == "pinn") return ModelKind::pinn;
  if (name == "sfpinn") return ModelKind::sfpinn;
  if (name == "sfhcpinn") return ModelKind::sfhcpinn;
  if (name == "sfhcpinn_nn") return ModelKind::sfhcpinn_nn;
  throw Error(ErrorKind::invalid_config, "unknown model '" + std::string(name) + "'");
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::pinn: return "pinn";
    case ModelKind::sfpinn: return "sfpinn";
    case ModelKind::sfhcpinn: return "sfhcpinn";
    case ModelKind::sfhcpinn_nn: return "sfhcpinn_nn";
  }
  return "unknown";
}

double Staircase::operator()(long epoch, long t_max) const {
  if (t_max <= 0) return multipliers.front();
  const double frac = static_cast<double>(epoch) / static_cast<double>(t_max);
  std::size_t band = 0;
  for (std::size_t i = 1; i < starts.size(); ++i) {
    if (frac >= starts[i]) band = i;
  }
  return multipliers[band];
}

void Staircase::validate() const {
  if (starts.empty() || starts.size() != multipliers.size() || starts.front() != 0.0) {
    throw Error(ErrorKind::invalid_config, "staircase needs matching bands starting at 0");
  }
  for (std::size_t i = 1; i < starts.size(); ++i) {
    if (!(starts[i] > starts[i - 1]) || multipliers[i] < multipliers[i - 1]) {
      throw Error(ErrorKind::invalid_config, "staircase bands must increase and multipliers not decrease");
    }
  }
}

void LossWeights::validate() const {
  if (!(gamma0 > 0.0) || !(omega0 > 0.0)) throw Error(ErrorKind::invalid_config, "penalties must be positive");
  schedule.validate();
}

double gamma_schedule(long epoch, long t_max, double gamma0) { return gamma0 * Staircase{}(epoch, t_max); }

double LrSchedule::operator()(long epoch) const {
  return lr0 * std::pow(decay, static_cast<double>(epoch / every));
}

double lr_schedule(long epoch) { return LrSchedule{}(epoch); }

void TrainConfig::validate() const {
  problem.problem.validate();
  if (epochs < 0) throw Error(ErrorKind::invalid_config, "epochs must be >= 0");
  if (n_r < 1 || n_b < 1 || n_i < 1) throw Error(ErrorKind::invalid_config, "batch sizes must be >= 1");
  if (eval_every < 1) throw Error(ErrorKind::invalid_config, "eval_every must be >= 1");
  if (lr.every < 1 || !(lr.lr0 > 0.0)) throw Error(ErrorKind::invalid_config, "invalid learning-rate schedule");
  if (network.subnet.input_dim != problem.problem.input_dim()) {
    throw Error(ErrorKind::invalid_config, "network input_dim != problem input dimension");
  }
  network.validate();
  weights.validate();
  if (!problem.problem.has_exact()) throw Error(ErrorKind::invalid_config, "training needs an exact solution for testing");
  if (model == ModelKind::sfhcpinn && (!problem.distance.eval || !problem.extension.eval)) {
    throw Error(ErrorKind::invalid_config, "sfhcpinn needs closed-form D and G");
  }
}

namespace {

std::vector<int> range(int n) {
  std::vector<int> v;
  for (int i = 0; i < n; ++i) v.push_back(i);
  return v;
}

}  // namespace

LossEvaluator::LossEvaluator(const TrainConfig& config, FieldModel distance, FieldModel extension)
    : cfg_(&config), d_(std::move(distance)), g_(std::move(extension)),
      train_domain_(config.problem.problem.domain.training_domain()) {
  const AdeProblem& pr = config.problem.problem;
  const int n_faces = train_domain_.face_count();
  if (is_hard(config.model)) {
    if (!d_ || !g_) throw Error(ErrorKind::invalid_config, "hard models need D and G");
    bc_faces_ = pr.bc.faces_of(BcType::neumann, n_faces);
  } else {
    bc_faces_ = range(n_faces);
  }
}

TrainBatches LossEvaluator::sample(long epoch) const {
  const AdeProblem& pr = cfg_->problem.problem;
  const std::uint64_t s = cfg_->resample ? cfg_->seed + static_cast<std::uint64_t>(epoch) : cfg_->seed;
  TrainBatches b;
  b.interior = sample_interior(train_domain_, pr.bc.t0, pr.bc.t_end, cfg_->n_r, s);
  if (!bc_faces_.empty()) {
    b.boundary = sample_boundary(train_domain_, pr.bc.t0, pr.bc.t_end, cfg_->n_b, s, bc_faces_);
  } else {
    b.boundary.role = SampleRole::boundary;
    b.boundary.points.resize(pr.input_dim(), 0);
  }
  b.initial.role = SampleRole::initial;
  if (!is_hard(cfg_->model)) {
    b.initial = sample_initial(train_domain_, pr.bc.t0, cfg_->n_i, s);
  } else {
    b.initial.points.resize(pr.input_dim(), 0);
  }
  return b;
}

LossComponents LossEvaluator::evaluate(const ParamStore& params, const TrainBatches& b, long epoch,
                                       Eigen::VectorXd* grad) const {
  const AdeProblem& pr = cfg_->problem.problem;
  const bool hard = is_hard(cfg_->model);
  const int k = pr.input_dim();
  const int d = k - 1;
  if (b.interior.size() == 0) throw Error(ErrorKind::empty_sample_set, "interior batch is empty");
  if (grad) grad->setZero(params.size());
  ForwardTrace trace;
  ForwardTrace* tr = grad ? &trace : nullptr;
  LossComponents c;

  // The ansatz u = G + D N (or u = N) and the adjoint pullback to N.
  auto ansatz = [&](const Eigen::MatrixXd& pts, const JetRequest& req, JetBatch& dj) {
    JetBatch n = batch_forward(params, pts, req, tr);
    if (!hard) return n;
    dj = d_.jets(pts, req);
    return compose_ansatz(g_.jets(pts, req), dj, n);
  };
  auto pull = [&](const JetBatch& adj_u, const JetBatch& dj) {
    batch_backward(params, trace, hard ? compose_ansatz_adjoint(dj, adj_u) : adj_u, *grad);
  };

  {
    const Eigen::MatrixXd& pts = b.interior.points;
    JetBatch dj;
    const JetBatch u = ansatz(pts, JetRequest::laplacian(d), dj);
    const Eigen::VectorXd r = residual_batch(u, adepinn::evaluate(pr.forcing, pts), pr.coeffs);
    const double n = static_cast<double>(pts.cols());
    c.pde = r.squaredNorm() / n;
    if (grad) pull(residual_batch_adjoint(2.0 / n * r, pr.coeffs, k), dj);
  }

  if (b.boundary.size() > 0) {
    const Eigen::MatrixXd& pts = b.boundary.points;
    const Eigen::Index nb = pts.cols();
    bool any_neumann = false;
    for (int f : b.boundary.face) {
      any_neumann |= pr.bc.faces[static_cast<std::size_t>(f)].type == BcType::neumann;
    }
    JetBatch dj;
    const JetBatch u = ansatz(pts, any_neumann ? JetRequest::gradients() : JetRequest::values(), dj);
    Eigen::VectorXd m(nb);
    std::vector<int> axis(static_cast<std::size_t>(nb), -1);
    for (Eigen::Index j = 0; j < nb; ++j) {
      const int f = b.boundary.face[static_cast<std::size_t>(j)];
      const FaceCondition& cond = pr.bc.faces[static_cast<std::size_t>(f)];
      const double target = cond.data(detail::column(pts, j));
      if (cond.type == BcType::dirichlet) {
        m[j] = u.value[j] - target;
      } else {
        axis[static_cast<std::size_t>(j)] = pr.domain.face_axis(f);
        m[j] = u.grad(axis[static_cast<std::size_t>(j)], j) - target;
      }
    }
    const double gamma = cfg_->weights.gamma(epoch, cfg_->epochs);
    c.bc = gamma * m.squaredNorm() / static_cast<double>(nb);
    if (grad) {
      JetBatch adj = JetBatch::zeros(k, nb);
      const double s = 2.0 * gamma / static_cast<double>(nb);
      for (Eigen::Index j = 0; j < nb; ++j) {
        const int a = axis[static_cast<std::size_t>(j)];
        if (a < 0) {
          adj.value[j] = s * m[j];
        } else {
          adj.grad(a, j) = s * m[j];
        }
      }
      pull(adj, dj);
    }
  }

  if (b.initial.size() > 0) {
    const Eigen::MatrixXd& pts = b.initial.points;
    JetBatch dj;
    const JetBatch u = ansatz(pts, JetRequest::values(), dj);
    const Eigen::VectorXd m = u.value - adepinn::evaluate(pr.bc.initial, pts);
    const double n = static_cast<double>(pts.cols());
    const double omega = cfg_->weights.omega(epoch, cfg_->epochs);
    c.ic = omega * m.squaredNorm() / n;
    if (grad) {
      JetBatch adj = JetBatch::zeros(k, pts.cols());
      adj.value = 2.0 * omega / n * m;
      pull(adj, dj);
    }
  }

  c.total = c.pde + c.bc + c.ic;
  if (!std::isfinite(c.total)) throw Error(ErrorKind::non_finite, "loss is not finite");
  return c;
}

Eigen::VectorXd LossEvaluator::predict(const ParamStore& params, const Eigen::MatrixXd& points) const {
  const JetRequest req = JetRequest::values();
  Eigen::VectorXd n = batch_forward(params, points, req).value;
  if (!is_hard(cfg_->model)) return n;
  return g_.jets(points, req).value + d_.jets(points, req).value.cwiseProduct(n);
}

FittedConstraints fit_constraints(const Preset& preset, const MlpSpec& spec, const FitOptions& opts,
                                  Eigen::Index n_samples) {
  const AdeProblem& pr = preset.problem;
  const Domain dom = pr.domain.training_domain();
  const VanishingSet& vs = preset.distance.vanishing;
  MlpSpec s = spec;
  s.input_dim = pr.input_dim();
  const Eigen::MatrixXd on_set = vanishing_samples(dom, vs, pr.bc.t_end, n_samples, opts.seed);
  const Eigen::MatrixXd inside = sample_interior(dom, pr.bc.t0, pr.bc.t_end, n_samples, opts.seed).points;

  const int d = pr.spatial_dim();
  Eigen::VectorXd targets(on_set.cols());
  for (Eigen::Index j = 0; j < on_set.cols(); ++j) {
    const auto z = detail::column(on_set, j);
    if (vs.initial_time && on_set(d, j) == vs.t0) {
      targets[j] = pr.bc.initial(z);
      continue;
    }
    int face = -1;
    for (int f : vs.faces) {
      if (dom.on_face(on_set.col(j).head(d), f)) {
        face = f;
        break;
      }
    }
    if (face < 0 || pr.bc.faces[static_cast<std::size_t>(face)].type != BcType::dirichlet) {
      throw Error(ErrorKind::face_mismatch, "extension fit sample is not on a Dirichlet face");
    }
    targets[j] = pr.bc.faces[static_cast<std::size_t>(face)].data(z);
  }
  FittedConstraints out{fit_distance(on_set, inside, s, opts), fit_extension(on_set, targets, s, opts)};
  return out;
}

TrainResult train(const TrainConfig& cfg) {
  cfg.validate();
  const Preset& ps = cfg.problem;
  const AdeProblem& pr = ps.problem;

  TrainResult res(init_params(cfg.network, cfg.seed));
  res.distance = ps.distance.eval;
  res.extension = ps.extension.eval;
  if (cfg.model == ModelKind::sfhcpinn_nn) {
    FitOptions fo = cfg.fit;
    fo.seed = cfg.seed;
    FittedConstraints fc = fit_constraints(ps, cfg.fit_spec, fo, cfg.fit_samples);
    res.fit_distance_max_boundary = fc.distance.max_boundary;
    res.fit_extension_loss = fc.extension.final_loss;
    res.distance = FieldModel::network(std::move(fc.distance.params));
    res.extension = FieldModel::network(std::move(fc.extension.params));
  }
  const LossEvaluator ev(cfg, res.distance, res.extension);

  res.test = test_grid(pr.domain, pr.bc.t0, pr.bc.t_end, ps.test);
  if (res.test.size() == 0) throw Error(ErrorKind::empty_sample_set, "test slice is empty");
  res.test_exact = evaluate(pr.exact, res.test.points);

  ParamStore& params = res.params;
  AdamState adam(params.size());
  const Eigen::VectorXd mask = params.trainable_mask();
  Eigen::VectorXd grad(params.size());
  ErrorSummary current;
  res.history.reserve(static_cast<std::size_t>(cfg.epochs));

  for (long epoch = 0; epoch < cfg.epochs; ++epoch) {
    TrainRecord rec;
    rec.epoch = epoch;
    rec.lr = cfg.lr(epoch);
    rec.gamma = cfg.weights.gamma(epoch, cfg.epochs);
    try {
      const TrainBatches batches = ev.sample(epoch);
      const LossComponents c = ev.evaluate(params, batches, epoch, &grad);
      rec.loss_total = c.total;
      rec.loss_pde = c.pde;
      rec.loss_bc = c.bc;
      rec.loss_ic = c.ic;
      const bool eval_now = epoch % cfg.eval_every == 0 || epoch + 1 == cfg.epochs;
      if (eval_now) current = summarize(ev.predict(params, res.test.points), res.test_exact);
      rec.mse = current.mse;
      rec.rel = current.rel;
      res.history.push_back(rec);
      if (eval_now && cfg.on_eval) cfg.on_eval(rec);
      adam_step(adam, params.flat(), grad, rec.lr, &mask);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::non_finite) throw;
      throw TrainingDiverged(e.what(), epoch, params, res.history);
    }
  }

  res.test_prediction = ev.predict(params, res.test.points);
  if (!res.test_prediction.allFinite()) {
    throw TrainingDiverged("final prediction is not finite", cfg.epochs, params, res.history);
  }
  res.summary = summarize(res.test_prediction, res.test_exact);
  return res;
}

void write_history_csv(std::ostream& out, const std::vector<TrainRecord>& history) {
  out << "epoch,loss_total,loss_pde,loss_bc,loss_ic,mse,rel,lr,gamma\n";
  for (const TrainRecord& r : history) {
    out << r.epoch << ',' << format_double(r.loss_total) << ',' << format_double(r.loss_pde) << ','
        << format_double(r.loss_bc) << ',' << format_double(r.loss_ic) << ',' << format_double(r.mse) << ','
        << format_double(r.rel) << ',' << format_double(r.lr) << ',' << format_double(r.gamma) << '\n';
  }
}

}  // namespace adepinn
