#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "adepinn/csv.hpp"
#include "adepinn/experiment.hpp"
#include "adepinn/training.hpp"

using namespace adepinn;

namespace {

/// Small, quick configuration for one example and model.
TrainConfig quick_config(const std::string& example, ModelKind model, long epochs = 20) {
  RunConfig rc;
  rc.example = example;
  rc.model = model;
  rc.epochs = epochs;
  rc.n_r = 64;
  rc.n_b = 16;
  rc.n_i = 16;
  rc.eval_every = 5;
  rc.fit_steps = 50;
  rc.fit_samples = 100;
  rc.preset_options.test_resolution = 20;
  rc.preset_options.test_count = 200;
  return make_train_config(rc);
}

TrainBatches batches_for(const AdeProblem& pr, std::uint64_t seed, Eigen::Index n = 50) {
  const Domain dom = pr.domain.training_domain();
  return {sample_interior(dom, pr.bc.t0, pr.bc.t_end, n, seed),
          sample_boundary(dom, pr.bc.t0, pr.bc.t_end, n, seed),
          sample_initial(dom, pr.bc.t0, n, seed)};
}

ScalarField zero_field() {
  return ScalarField([](auto z) {
    std::remove_cv_t<typename decltype(z)::element_type> r(0.0);
    return r;
  });
}

}  // namespace

TEST_CASE("gamma staircase") {
  CHECK(gamma_schedule(0, 50000) == 20.0);
  CHECK(gamma_schedule(15000, 50000) == 2000.0);
  CHECK(gamma_schedule(45000, 50000) == 10000.0);
  const long t_max = 50000;
  const std::vector<std::pair<long, double>> bands{{0, 20},      {4999, 20},     {5000, 200},    {9999, 200},
                                                   {10000, 1000}, {12499, 1000}, {12500, 2000},  {24999, 2000},
                                                   {25000, 4000}, {37499, 4000}, {37500, 10000}, {49999, 10000}};
  for (const auto& [epoch, g] : bands) {
    CAPTURE(epoch);
    CHECK(gamma_schedule(epoch, t_max) == g);
  }
  std::set<double> seen;
  double prev = 0.0;
  for (long e = 0; e < t_max; e += 7) {
    const double g = gamma_schedule(e, t_max);
    CHECK(g >= prev);
    prev = g;
    seen.insert(g / 20.0);
  }
  CHECK(seen == std::set<double>{1, 10, 50, 100, 200, 500});
}

TEST_CASE("learning-rate schedule") {
  CHECK(lr_schedule(0) == 0.01);
  CHECK(lr_schedule(99) == 0.01);
  CHECK(lr_schedule(100) == 0.00975);
  CHECK(lr_schedule(250) == doctest::Approx(0.00950625).epsilon(1e-15));
}

TEST_CASE("Adam steps") {
  SUBCASE("zero gradient leaves parameters") {
    AdamState s(3);
    Eigen::VectorXd p(3);
    p << 1, -2, 3;
    const Eigen::VectorXd before = p;
    adam_step(s, p, Eigen::VectorXd::Zero(3), 0.1);
    CHECK(p == before);
  }
  SUBCASE("first step by hand") {
    AdamState s(1);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(1);
    adam_step(s, p, Eigen::VectorXd::Ones(1), 0.1);
    CHECK(s.m[0] == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(s.v[0] == doctest::Approx(0.001).epsilon(1e-15));
    CHECK(p[0] == doctest::Approx(-0.1 / (1.0 + 1e-8)).epsilon(1e-15));
  }
  SUBCASE("second identical step by hand") {
    AdamState s(1);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(1);
    const Eigen::VectorXd g = Eigen::VectorXd::Constant(1, 0.5);
    adam_step(s, p, g, 0.01);
    const double after_one = p[0];
    adam_step(s, p, g, 0.01);
    const double m = 0.1 * 0.5 * 0.9 + 0.1 * 0.5;
    const double v = 0.001 * 0.25 * 0.999 + 0.001 * 0.25;
    const double mh = m / (1 - 0.9 * 0.9);
    const double vh = v / (1 - 0.999 * 0.999);
    CHECK(std::abs((after_one - p[0]) - 0.01 * mh / (std::sqrt(vh) + 1e-8)) < 1e-12);
  }
  SUBCASE("errors") {
    AdamState s(1);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(1);
    CHECK_THROWS_AS(adam_step(s, p, Eigen::VectorXd::Constant(1, NAN), 0.1), Error);
    CHECK_THROWS_AS(adam_step(s, p, Eigen::VectorXd::Ones(1), 0.0), Error);
  }
}

TEST_CASE("soft loss") {
  const Preset ex1 = preset("ex1");
  const AdeProblem& pr = ex1.problem;
  const TrainBatches b = batches_for(pr, 3);
  const LossWeights w;
  SUBCASE("exact solution") {
    const LossComponents c = soft_loss(pr.exact, b, pr, w, 0, 100);
    CHECK(c.pde < 1e-10);
    CHECK(c.bc < 1e-10);
    CHECK(c.ic < 1e-10);
    CHECK(c.total < 1e-9);
  }
  SUBCASE("constant boundary mismatch") {
    const double off = 0.3;
    const ScalarField shifted([&pr, off](auto z) { return pr.exact(z) + off; });
    TrainBatches only_b = b;
    only_b.initial.points.resize(2, 0);
    const LossComponents c = soft_loss(shifted, only_b, pr, w, 0, 100);
    CHECK(c.bc == doctest::Approx(20.0 * off * off).epsilon(1e-12));
  }
  SUBCASE("empty interior batch") {
    TrainBatches e = b;
    e.interior.points.resize(2, 0);
    CHECK_THROWS_AS(soft_loss(pr.exact, e, pr, w, 0, 100), Error);
  }
}

TEST_CASE("hard losses") {
  SUBCASE("Dirichlet loss on ex3 with a zero core is the residual of G") {
    const Preset ex3 = preset("ex3");
    const AdeProblem& pr = ex3.problem;
    const TrainBatches b = batches_for(pr, 4);
    const HardAnsatz a{ex3.extension, ex3.distance, zero_field()};
    CHECK(hard_loss_dirichlet(a, b.interior, pr) == detail::mean_sq_residual(ex3.extension.eval, b.interior, pr));
    const HardAnsatz exact{ExtensionFn{pr.exact}, ex3.distance, zero_field()};
    CHECK(hard_loss_dirichlet(exact, b.interior, pr) < 1e-10);
  }
  SUBCASE("Neumann loss on ex2") {
    const Preset ex2 = preset("ex2");
    const AdeProblem& pr = ex2.problem;
    const TrainBatches b = batches_for(pr, 5);
    const HardAnsatz exact{ExtensionFn{pr.exact}, ex2.distance, zero_field()};
    const LossComponents c = hard_loss_neumann(exact, b.interior, b.boundary, pr, LossWeights{}, 0, 100);
    CHECK(c.pde < 1e-10);
    CHECK(c.bc < 1e-10);

    const HardAnsatz g_only{ex2.extension, ex2.distance, ScalarField([](auto z) { return z[0] * z[1]; })};
    LossWeights w;
    const LossComponents base = hard_loss_neumann(g_only, b.interior, b.boundary, pr, w, 0, 100);
    REQUIRE(base.bc > 0.0);
    w.gamma0 = 40.0;
    CHECK(hard_loss_neumann(g_only, b.interior, b.boundary, pr, w, 0, 100).bc == doctest::Approx(2 * base.bc).epsilon(1e-14));
    const LossComponents later = hard_loss_neumann(g_only, b.interior, b.boundary, pr, LossWeights{}, 10, 100);
    CHECK(later.pde == base.pde);
    CHECK(later.bc == doctest::Approx(10 * base.bc).epsilon(1e-14));
  }
}

TEST_CASE("batched training loss agrees with the pointwise losses") {
  for (const char* id : {"ex1", "ex2", "ex3", "ex5"}) {
    for (ModelKind m : {ModelKind::pinn, ModelKind::sfpinn, ModelKind::sfhcpinn}) {
      CAPTURE(id);
      CAPTURE(to_string(m));
      const TrainConfig cfg = quick_config(id, m);
      const LossEvaluator ev(cfg, cfg.problem.distance.eval, cfg.problem.extension.eval);
      const ParamStore ps = init_params(cfg.network, 2);
      const TrainBatches b = ev.sample(30);
      const LossComponents c = ev.evaluate(ps, b, 30, nullptr);
      const AdeProblem& pr = cfg.problem.problem;
      LossComponents ref;
      if (!is_hard(m)) {
        ref = soft_loss(NetworkPredictor(ps), b, pr, cfg.weights, 30, cfg.epochs);
      } else {
        const HardAnsatz a{cfg.problem.extension, cfg.problem.distance, ScalarField(NetworkPredictor(ps))};
        if (pr.bc.any(BcType::neumann)) {
          ref = hard_loss_neumann(a, b.interior, b.boundary, pr, cfg.weights, 30, cfg.epochs);
        } else {
          ref.pde = ref.total = hard_loss_dirichlet(a, b.interior, pr);
        }
      }
      CHECK(c.pde == doctest::Approx(ref.pde).epsilon(1e-10));
      CHECK(c.bc == doctest::Approx(ref.bc).epsilon(1e-10));
      CHECK(c.ic == doctest::Approx(ref.ic).epsilon(1e-10));
    }
  }
}

TEST_CASE("hard Dirichlet problems sample no boundary or initial points") {
  const TrainConfig cfg = quick_config("ex1", ModelKind::sfhcpinn);
  const LossEvaluator ev(cfg, cfg.problem.distance.eval, cfg.problem.extension.eval);
  const TrainBatches b = ev.sample(0);
  CHECK(b.boundary.size() == 0);
  CHECK(b.initial.size() == 0);
  const TrainConfig neu = quick_config("ex2", ModelKind::sfhcpinn);
  const LossEvaluator ev2(neu, neu.problem.distance.eval, neu.problem.extension.eval);
  CHECK(ev2.sample(0).boundary.size() == 16);
}

TEST_CASE("a small step decreases the loss") {
  TrainConfig cfg = quick_config("ex3", ModelKind::sfhcpinn);
  cfg.n_r = 128;
  const LossEvaluator ev(cfg, cfg.problem.distance.eval, cfg.problem.extension.eval);
  int decreased = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    ParamStore ps = init_params(cfg.network, seed);
    const TrainBatches b = ev.sample(static_cast<long>(seed));
    Eigen::VectorXd g(ps.size());
    const double before = ev.evaluate(ps, b, 0, &g).total;
    AdamState adam(ps.size());
    adam_step(adam, ps.flat(), g, 1e-4);
    decreased += ev.evaluate(ps, b, 0, nullptr).total < before;
  }
  CHECK(decreased >= 95);
}

TEST_CASE("train") {
  SUBCASE("zero epochs") {
    const TrainConfig cfg = quick_config("ex3", ModelKind::sfhcpinn, 0);
    const TrainResult r = train(cfg);
    CHECK(r.history.empty());
    CHECK(r.params.flat() == init_params(cfg.network, cfg.seed).flat());
  }
  SUBCASE("deterministic histories") {
    for (ModelKind m : {ModelKind::sfpinn, ModelKind::sfhcpinn_nn}) {
      const TrainConfig cfg = quick_config("ex2", m, 12);
      std::ostringstream a, b;
      write_history_csv(a, train(cfg).history);
      write_history_csv(b, train(cfg).history);
      CHECK(a.str() == b.str());
    }
  }
  SUBCASE("history rows and evaluation cadence") {
    const TrainConfig cfg = quick_config("ex1", ModelKind::pinn, 12);
    const TrainResult r = train(cfg);
    REQUIRE(r.history.size() == 12);
    for (std::size_t e = 0; e < 12; ++e) CHECK(r.history[e].epoch == static_cast<long>(e));
    CHECK(r.history[4].rel == r.history[0].rel);
    CHECK(r.history[5].rel != r.history[4].rel);
    CHECK(r.history[0].loss_ic > 0.0);
    CHECK(std::isfinite(r.summary.rel));
  }
  SUBCASE("divergence aborts with the last good parameters") {
    TrainConfig cfg = quick_config("ex3", ModelKind::pinn, 50);
    cfg.lr.lr0 = 1e300;
    try {
      train(cfg);
      FAIL("expected divergence");
    } catch (const TrainingDiverged& e) {
      CHECK(e.kind() == ErrorKind::non_finite);
      CHECK(e.last_good().flat().allFinite());
      CHECK(e.history().size() == static_cast<std::size_t>(e.epoch()));
    }
  }
}

TEST_CASE("history CSV") {
  std::vector<TrainRecord> h{{0, 1.5, 1.0, 0.25, 0.25, 0.1, 0.2, 0.01, 20.0}, {1, 0.1 + 0.2, 0, 0, 0, 0, 0, 0.00975, 20}};
  std::ostringstream out;
  write_history_csv(out, h);
  std::istringstream in(out.str());
  std::string header, row0, row1;
  std::getline(in, header);
  std::getline(in, row0);
  std::getline(in, row1);
  CHECK(header == "epoch,loss_total,loss_pde,loss_bc,loss_ic,mse,rel,lr,gamma");
  CHECK(row0 == "0,1.5,1,0.25,0.25,0.1,0.2,0.01,20");
  CHECK(parse_double(row1.substr(2, row1.find(',', 2) - 2)) == 0.1 + 0.2);
}
