/**
 * @file acceptance.cpp
 * @brief End-to-end acceptance checks, one PASS/FAIL line per criterion.
 *
 * Runs every criterion even when an earlier one fails and exits non-zero if
 * any failed. Training-based criteria take tens of minutes on one core.
 */

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>

#ifdef __GLIBC__
#include <malloc.h>
#endif

#include "adepinn/batch_network.hpp"
#include "adepinn/csv.hpp"
#include "adepinn/experiment.hpp"
#include "adepinn/oracle.hpp"
#include "adepinn/rng.hpp"

using namespace adepinn;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

double median3(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

// ---------------------------------------------------------------------------
// 1. Derivative correctness
// ---------------------------------------------------------------------------

EnsembleSpec random_spec(CounterRng& rng) {
  static const ActivationKind smooth[] = {ActivationKind::sin,           ActivationKind::cos,
                                          ActivationKind::tanh,          ActivationKind::enhanced_tanh,
                                          ActivationKind::sigmoid,       ActivationKind::gelu};
  auto pick = [&rng](int n) { return static_cast<int>(rng.uniform() * n); };
  EnsembleSpec es;
  es.subnet.input_dim = 2 + pick(3);
  const int depth = 1 + pick(3);
  es.subnet.hidden_sizes.clear();
  for (int i = 0; i < depth; ++i) es.subnet.hidden_sizes.push_back(2 * (1 + pick(4)));
  es.subnet.hidden_activation = smooth[pick(6)];
  es.subnet.first_layer_activation = rng.uniform() < 0.5 ? ActivationKind::fourier_pair : smooth[pick(6)];
  const int n_sub = 1 + pick(3);
  es.scale_factors.clear();
  for (int i = 0; i < n_sub; ++i) es.scale_factors.push_back(rng.uniform(0.5, 4.0));
  es.combination = rng.uniform() < 0.3 ? Combination::learned_head : Combination::fixed_average;
  return es;
}

Outcome criterion_derivatives() {
  CounterRng rng(2024, Stream::misc);
  double worst_first = 0.0, worst_second = 0.0, worst_param = 0.0;
  for (int cfg = 0; cfg < 50; ++cfg) {
    const EnsembleSpec es = random_spec(rng);
    ParamStore ps = init_params(es, 1000 + cfg);
    for (Eigen::Index i = 0; i < ps.size(); ++i) ps.flat()[i] += 0.05 * rng.uniform(-1.0, 1.0);
    const int k = es.subnet.input_dim;
    Eigen::MatrixXd pts(k, 20);
    for (Eigen::Index j = 0; j < pts.size(); ++j) pts.data()[j] = rng.uniform(-1.0, 1.0);

    // Input jets against central differences.
    const NetworkPredictor net(ps);
    for (Eigen::Index j = 0; j < pts.cols(); ++j) {
      const Eigen::VectorXd p = pts.col(j);
      const std::span<const double> z(p.data(), static_cast<std::size_t>(k));
      const DerivativeReport first = check_derivatives(net, z, 1e-5);
      const DerivativeReport second = check_derivatives(net, z, 1e-4);
      worst_first = std::max(worst_first, first.max_first());
      worst_second = std::max(worst_second, second.max_second());
    }

    // Parameter gradient of a residual-style loss: tape and batched reverse passes against differences.
    const JetRequest req = JetRequest::full(k);
    auto loss_of = [&](const ParamStore& q) {
      const JetBatch u = batch_forward(q, pts, req);
      Eigen::VectorXd r = u.grad.row(k - 1).transpose() + 0.3 * u.grad.row(0).transpose() - 0.1 * u.hess.row(0).transpose() -
                          0.2 * u.value;
      return r.squaredNorm() / static_cast<double>(pts.cols());
    };
    ForwardTrace trace;
    const JetBatch u = batch_forward(ps, pts, req, &trace);
    const Eigen::VectorXd r = u.grad.row(k - 1).transpose() + 0.3 * u.grad.row(0).transpose() -
                              0.1 * u.hess.row(0).transpose() - 0.2 * u.value;
    const Eigen::VectorXd w = 2.0 / static_cast<double>(pts.cols()) * r;
    JetBatch adj = JetBatch::zeros(k, pts.cols());
    adj.grad.row(k - 1) = w.transpose();
    adj.grad.row(0) += 0.3 * w.transpose();
    adj.hess.row(0) = -0.1 * w.transpose();
    adj.value = -0.2 * w;
    Eigen::VectorXd g_batch = Eigen::VectorXd::Zero(ps.size());
    batch_backward(ps, trace, adj, g_batch);

    const NetworkLayout& layout = ps.layout();
    auto tape_loss = [&](std::span<const ad::Var> theta) {
      using D = ad::Dual2<ad::Var>;
      ad::Var acc(0.0);
      for (Eigen::Index j = 0; j < pts.cols(); ++j) {
        std::vector<D> z(static_cast<std::size_t>(k));
        auto along = [&](int axis) {
          for (int i = 0; i < k; ++i) z[static_cast<std::size_t>(i)] = D(ad::Var(pts(i, j)));
          z[static_cast<std::size_t>(axis)] = D::variable(ad::Var(pts(axis, j)));
          return network_forward<D, ad::Var>(layout, theta, std::span<const D>(z));
        };
        const D ux = along(0);
        const D ut = along(k - 1);
        const ad::Var res = ut.d + 0.3 * ux.d - 0.1 * ux.dd - 0.2 * ux.v;
        acc = acc + res * res;
      }
      return acc / static_cast<double>(pts.cols());
    };
    const Eigen::VectorXd g_tape = grad_params(tape_loss, ps.flat());

    for (Eigen::Index i = 0; i < ps.size(); ++i) {
      ParamStore q = ps;
      const double h = 1e-6;
      q.flat()[i] += h;
      const double lp = loss_of(q);
      q.flat()[i] -= 2 * h;
      const double lm = loss_of(q);
      const double fd = (lp - lm) / (2 * h);
      worst_param = std::max({worst_param, scaled_discrepancy(g_batch[i], fd), scaled_discrepancy(g_tape[i], fd)});
    }
  }
  const bool ok = worst_first < 1e-5 && worst_second < 1e-4 && worst_param < 1e-4;
  return {ok, "max rel err: first " + fmt(worst_first) + ", second " + fmt(worst_second) + ", params " +
                  fmt(worst_param) + " over 50 configs x 20 points"};
}

// ---------------------------------------------------------------------------
// 2. Manufactured forcing
// ---------------------------------------------------------------------------

Outcome criterion_forcing() {
  double worst = 0.0;
  for (const std::string& id : preset_ids()) {
    const Preset ps = preset(id);
    const AdeProblem& pr = ps.problem;
    const SampleBatch b = sample_interior(pr.domain, pr.bc.t0, pr.bc.t_end, 1000, 77);
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      const std::span<const double> z(b.points.col(j).data(), static_cast<std::size_t>(b.points.rows()));
      worst = std::max(worst, std::abs(residual(pr.exact, z, pr)));
    }
  }
  return {worst < 1e-8, "max |residual| " + fmt(worst) + " over ex1-ex7 x 1000 points"};
}

// ---------------------------------------------------------------------------
// 3. Hard-constraint exactness
// ---------------------------------------------------------------------------

Outcome criterion_hard_constraints() {
  double worst_bc = 0.0, worst_ic = 0.0;
  for (const char* id : {"ex1", "ex3", "ex4", "ex6", "ex7"}) {
    const Preset ps = preset(id);
    const AdeProblem& pr = ps.problem;
    const Domain dom = pr.domain.training_domain();
    const std::vector<int> faces = pr.bc.faces_of(BcType::dirichlet, dom.face_count());
    const int d = pr.spatial_dim();
    EnsembleSpec es;
    es.subnet.input_dim = pr.input_dim();
    es.scale_factors = {1, 2, 3, 4};
    for (std::uint64_t draw = 0; draw < 10; ++draw) {
      const ParamStore core_params = init_params(es, 500 + draw);
      const HardAnsatz a{ps.extension, ps.distance, ScalarField(NetworkPredictor(core_params))};
      const SampleBatch b = sample_boundary(dom, pr.bc.t0, pr.bc.t_end, 1000, 600 + draw, faces);
      for (Eigen::Index j = 0; j < b.size(); ++j) {
        const std::span<const double> z(b.points.col(j).data(), static_cast<std::size_t>(d + 1));
        const double g = pr.bc.faces[static_cast<std::size_t>(b.face[static_cast<std::size_t>(j)])].data(z);
        worst_bc = std::max(worst_bc, std::abs(a(z) - g));
      }
      if (ps.distance_has_time_factor) {
        const SampleBatch i0 = sample_initial(dom, pr.bc.t0, 1000, 700 + draw);
        for (Eigen::Index j = 0; j < i0.size(); ++j) {
          const std::span<const double> z(i0.points.col(j).data(), static_cast<std::size_t>(d + 1));
          worst_ic = std::max(worst_ic, std::abs(a(z) - pr.bc.initial(z)));
        }
      }
    }
  }
  return {worst_bc < 1e-10 && worst_ic < 1e-10,
          "max |ansatz - g| " + fmt(worst_bc) + ", max |ansatz(t0) - h| " + fmt(worst_ic)};
}

// ---------------------------------------------------------------------------
// 4. Schedules
// ---------------------------------------------------------------------------

Outcome criterion_schedules() {
  const long t_max = 50000;
  const long starts[] = {0, 5000, 10000, 12500, 25000, 37500};
  const double expected[] = {20, 200, 1000, 2000, 4000, 10000};
  bool ok = true;
  for (int b = 0; b < 6; ++b) {
    ok &= gamma_schedule(starts[b], t_max, 20.0) == expected[b];
    if (b > 0) ok &= gamma_schedule(starts[b] - 1, t_max, 20.0) == expected[b - 1];
  }
  ok &= gamma_schedule(t_max - 1, t_max, 20.0) == 10000.0;
  const bool lr_ok = lr_schedule(0) == 0.01 && lr_schedule(100) == 0.00975;
  return {ok && lr_ok, std::string("staircase bands ") + (ok ? "exact" : "wrong") + ", lr(0)=" + fmt(lr_schedule(0)) +
                           " lr(100)=" + format_double(lr_schedule(100))};
}

// ---------------------------------------------------------------------------
// 5, 6, 7. Desk-scale training
// ---------------------------------------------------------------------------

RunConfig desk_config(const std::string& example, ModelKind model, std::uint64_t seed) {
  RunConfig c;
  c.example = example;
  c.model = model;
  c.seed = seed;
  return c;
}

struct TrainedEx3 {
  std::vector<TrainResult> runs;
  std::vector<double> rel;
};

TrainedEx3& ex3_runs() {
  static TrainedEx3 t = [] {
    TrainedEx3 out;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const TrainConfig tc = make_train_config(desk_config("ex3", ModelKind::sfhcpinn, seed));
      out.runs.push_back(train(tc));
      out.rel.push_back(out.runs.back().summary.rel);
    }
    return out;
  }();
  return t;
}

Outcome criterion_ex3_quality() {
  const TrainedEx3& t = ex3_runs();
  const double mean = std::accumulate(t.rel.begin(), t.rel.end(), 0.0) / 3.0;
  return {mean < 1e-3, "ex3 sfhcpinn 5000 epochs, REL per seed " + fmt(t.rel[0]) + ", " + fmt(t.rel[1]) + ", " +
                           fmt(t.rel[2]) + "; mean " + fmt(mean)};
}

Outcome criterion_ordering() {
  std::string detail;
  bool ok = true;
  for (const char* id : {"ex1", "ex2"}) {
    std::vector<double> hard, soft;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      hard.push_back(train(make_train_config(desk_config(id, ModelKind::sfhcpinn, seed))).summary.rel);
      soft.push_back(train(make_train_config(desk_config(id, ModelKind::pinn, seed))).summary.rel);
    }
    const double mh = median3(hard), ms = median3(soft);
    ok &= mh < ms;
    detail += std::string(id) + " median REL sfhcpinn " + fmt(mh) + " vs pinn " + fmt(ms) + "; ";
  }
  return {ok, detail};
}

Outcome criterion_oracle() {
  const Preset ps = preset("ex3");
  double prev = 0.0;
  double lo = 1e9, hi = -1e9;
  for (int n : {50, 100, 200, 400}) {
    const double r = cross_check(ps.problem.exact, crank_nicolson_1d(ps.problem, n, n)).rel;
    if (prev > 0.0) {
      const double order = 0.5 * std::log2(prev / r);
      lo = std::min(lo, order);
      hi = std::max(hi, order);
    }
    prev = r;
  }
  const FdGrid grid = crank_nicolson_1d(ps.problem, 400, 400);
  double worst = 0.0;
  for (const TrainResult& run : ex3_runs().runs) {
    const FieldModel core = FieldModel::network(run.params);
    const HardAnsatz a{ps.extension, ps.distance, core.field()};
    worst = std::max(worst, cross_check(a, grid).rel);
  }
  const bool ok = lo >= 1.8 && hi <= 2.2 && worst < 5e-3;
  return {ok, "orders in [" + fmt(lo) + ", " + fmt(hi) + "], trained vs 400x400 grid max REL " + fmt(worst)};
}

// ---------------------------------------------------------------------------
// 8. Metric identities
// ---------------------------------------------------------------------------

Outcome criterion_metrics() {
  CounterRng rng(8, Stream::misc);
  Eigen::VectorXd u(257), p(257);
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    u[i] = rng.uniform(-3.0, 3.0);
    p[i] = u[i] + rng.uniform(-0.1, 0.1);
  }
  const bool doubled = rel(2.0 * u, u) == 1.0;
  double worst_scale = 0.0;
  for (double s : {1e-3, 0.5, 7.0, 1e4}) worst_scale = std::max(worst_scale, std::abs(rel(s * p, s * u) / rel(p, u) - 1.0));
  Eigen::VectorXd a(2), z = Eigen::VectorXd::Zero(2);
  a << 1, 2;
  const bool triple = mse(a, z) == 2.5;
  return {doubled && worst_scale < 1e-14 && triple,
          std::string("rel(2u,u)=") + format_double(rel(2.0 * u, u)) + ", scaling drift " + fmt(worst_scale) +
              ", mse([1,2],[0,0])=" + format_double(mse(a, z))};
}

// ---------------------------------------------------------------------------
// 9. Determinism of CLI commands
// ---------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool run_cli(const std::string& args) {
  const std::string cmd = std::string(ADEPINN_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str()) == 0;
}

Outcome criterion_determinism() {
  const fs::path root = fs::temp_directory_path() / "adepinn_acceptance_cli";
  fs::remove_all(root);
  setenv("ADEPINN_OUT_ROOT", root.c_str(), 1);
  struct Cmd {
    std::string args;
    std::vector<std::string> histories;
  };
  const std::vector<Cmd> cmds{
      {"run --example ex1 --model sfhcpinn --epochs 60 --seed 7", {"history.csv"}},
      {"run --example ex4 --model sfpinn --epochs 20 --seed 3 --n-r 300", {"history.csv"}},
      {"run --example ex2 --model sfhcpinn_nn --epochs 20 --seed 5 --n-r 200", {"history.csv"}},
      {"sweep --example ex3 --epochs 20 --seed 2 --sweep-axis lr0 --sweep-values 0.01 0.005",
       {"lr0_0.01/history.csv", "lr0_0.005/history.csv"}},
      {"compare --example ex3 --model pinn sfhcpinn --epochs 20 --seed 4", {"pinn/history.csv", "sfhcpinn/history.csv"}},
  };
  int compared = 0;
  bool ok = true;
  for (std::size_t c = 0; c < cmds.size(); ++c) {
    const std::string a = "det" + std::to_string(c) + "a", b = "det" + std::to_string(c) + "b";
    ok &= run_cli(cmds[c].args + " --out " + a) && run_cli(cmds[c].args + " --out " + b);
    for (const std::string& h : cmds[c].histories) {
      const std::string x = slurp(root / a / h), y = slurp(root / b / h);
      ok &= !x.empty() && x == y;
      ++compared;
    }
  }
  return {ok, std::to_string(compared) + " history pairs from run, sweep and compare " +
                  (ok ? "byte-identical" : "differ or missing")};
}

}  // namespace

int main(int argc, char** argv) {
#ifdef __GLIBC__
  mallopt(M_MMAP_THRESHOLD, 1 << 30);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"derivative correctness", criterion_derivatives},
      {"manufactured forcing consistency", criterion_forcing},
      {"hard-constraint boundary exactness", criterion_hard_constraints},
      {"schedule fidelity", criterion_schedules},
      {"scaled-down solve quality (ex3)", criterion_ex3_quality},
      {"method ordering (ex1, ex2)", criterion_ordering},
      {"oracle agreement", criterion_oracle},
      {"metric identities", criterion_metrics},
      {"determinism", criterion_determinism},
  };
  int failed = 0;
  // Optional arguments select criteria by number; the default runs all of them.
  std::vector<bool> selected(criteria.size(), argc <= 1);
  for (int a = 1; a < argc; ++a) {
    const int n = std::atoi(argv[a]);
    if (n >= 1 && n <= static_cast<int>(criteria.size())) selected[static_cast<std::size_t>(n - 1)] = true;
  }
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected[i]) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::cout << "criterion " << i + 1 << " [" << (o.pass ? "PASS" : "FAIL") << "] " << criteria[i].first << ": "
              << o.detail << " (" << fmt(secs) << " s)" << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << '\n';
  return failed ? 1 : 0;
}
