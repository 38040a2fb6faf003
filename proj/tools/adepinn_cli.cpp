/**
 * @file adepinn_cli.cpp
 * @brief Experiment runner: run, sweep, compare, sample and oracle subcommands.
 *
 * Output directories default to $ADEPINN_OUT_ROOT (or ./runs) joined with a
 * name derived from the example, model and seed. A relative --out is also
 * placed under $ADEPINN_OUT_ROOT when that variable is set.
 */

#include <cstdlib>
#include <fstream>
#include <iostream>

#ifdef __GLIBC__
#include <malloc.h>
#endif

#include <CLI11.hpp>

#include "adepinn/checkpoint.hpp"
#include "adepinn/csv.hpp"
#include "adepinn/experiment.hpp"
#include "adepinn/oracle.hpp"

namespace {

using namespace adepinn;

struct CommonFlags {
  std::string config;
  std::optional<std::string> example;
  std::optional<std::string> out;
  std::optional<long> epochs;
  std::optional<std::uint64_t> seed;
  std::optional<long> eval_every;
  std::optional<Eigen::Index> n_r, n_b, n_i;
  bool paper_scale = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "JSON config file; flags override its values")->check(CLI::ExistingFile);
    app->add_option("--example", example, "preset id (ex1..ex7)");
    app->add_option("--out", out, "output directory");
    app->add_option("--epochs", epochs, "training epochs");
    app->add_option("--seed", seed, "random seed");
    app->add_option("--eval-every", eval_every, "test evaluation cadence in epochs");
    app->add_option("--n-r", n_r, "interior points per epoch");
    app->add_option("--n-b", n_b, "boundary points per epoch");
    app->add_option("--n-i", n_i, "initial points per epoch");
    app->add_flag("--paper-scale", paper_scale, "published epoch count, ensemble and batch sizes");
  }
};

std::filesystem::path out_root() {
  const char* env = std::getenv("ADEPINN_OUT_ROOT");
  return env && *env ? std::filesystem::path(env) : std::filesystem::path("runs");
}

std::filesystem::path resolve_out(const std::optional<std::string>& flag, const std::string& fallback) {
  if (!flag) return out_root() / fallback;
  std::filesystem::path p(*flag);
  if (p.is_relative() && std::getenv("ADEPINN_OUT_ROOT")) return out_root() / p;
  return p;
}

RunConfig build_config(const CommonFlags& f, const std::optional<std::string>& model, const std::string& tag) {
  RunConfig c;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw Error(ErrorKind::io_failure, "cannot read " + f.config);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::invalid_config, std::string("cannot parse config: ") + e.what());
    }
    c = run_config_from_json(j);
  }
  if (f.example) {
    c.example = *f.example;
    c.problem = nullptr;
  }
  if (model) c.model = parse_model(*model);
  if (f.epochs) c.epochs = *f.epochs;
  if (f.seed) c.seed = *f.seed;
  if (f.eval_every) c.eval_every = *f.eval_every;
  if (f.n_r) c.n_r = *f.n_r;
  if (f.n_b) c.n_b = *f.n_b;
  if (f.n_i) c.n_i = *f.n_i;
  if (f.paper_scale) c.paper_scale = true;
  const std::string id = c.problem.is_null() ? c.example : c.problem.value("id", std::string("custom"));
  const std::string name = id + "_" + tag + "_s" + std::to_string(c.seed);
  if (f.out || c.out.empty()) c.out = resolve_out(f.out, name);
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
#ifdef __GLIBC__
  // Training reallocates the same large buffers every epoch; keep them off mmap.
  mallopt(M_MMAP_THRESHOLD, 1 << 30);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif
  CLI::App app{"Neural solvers for unsteady advection-diffusion problems"};
  app.require_subcommand(1);

  CommonFlags run_f, sweep_f, cmp_f;
  std::optional<std::string> run_model, sweep_model;
  std::vector<std::string> cmp_models;
  std::string sweep_axis;
  std::vector<std::string> sweep_values;

  auto* run = app.add_subcommand("run", "train one model and write its artifacts");
  run_f.attach(run);
  run->add_option("--model", run_model, "pinn, sfpinn, sfhcpinn or sfhcpinn_nn");

  auto* sw = app.add_subcommand("sweep", "one run per value of a hyperparameter");
  sweep_f.attach(sw);
  sw->add_option("--model", sweep_model, "model variant");
  sw->add_option("--sweep-axis", sweep_axis, "activation, hidden_sizes or lr0")->required();
  sw->add_option("--sweep-values", sweep_values, "values, e.g. sin tanh gelu or 10,20,10 30,30,30");

  auto* cmp = app.add_subcommand("compare", "several models with the same budget and seed");
  cmp_f.attach(cmp);
  cmp->add_option("--model", cmp_models, "models to compare (repeat or list)")->expected(1, -1);

  std::string sample_example = "ex1";
  std::optional<std::string> sample_out;
  std::uint64_t sample_seed = 0;
  Eigen::Index s_nr = 2000, s_nb = 500, s_ni = 500;
  auto* smp = app.add_subcommand("sample", "write one epoch of collocation points and the test slice");
  smp->add_option("--example", sample_example, "preset id");
  smp->add_option("--seed", sample_seed, "random seed");
  smp->add_option("--out", sample_out, "output directory");
  smp->add_option("--n-r", s_nr, "interior points");
  smp->add_option("--n-b", s_nb, "boundary points");
  smp->add_option("--n-i", s_ni, "initial points");

  std::string oracle_example = "ex3";
  std::optional<std::string> oracle_out;
  int nx = 400, nt = 400;
  auto* orc = app.add_subcommand("oracle", "Crank-Nicolson reference solution of a 1D example");
  orc->add_option("--example", oracle_example, "ex1, ex2 or ex3");
  orc->add_option("--nx", nx, "spatial intervals");
  orc->add_option("--nt", nt, "time steps");
  orc->add_option("--out", oracle_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const RunConfig c = build_config(run_f, run_model, run_model.value_or("run"));
      const RunOutcome r = run_experiment(c, &std::cout);
      std::cout << "artifacts in " << r.dir.string() << '\n';
    } else if (*sw) {
      const RunConfig c = build_config(sweep_f, sweep_model, "sweep_" + sweep_axis);
      const auto rows = sweep(c, parse_sweep_axis(sweep_axis), sweep_values, &std::cout);
      for (const SweepRow& r : rows) {
        std::cout << r.label << "  " << (r.ok ? "rel " + format_double(r.summary.rel) : "failed: " + r.error) << '\n';
      }
    } else if (*cmp) {
      std::vector<ModelKind> models;
      for (const auto& m : cmp_models) models.push_back(parse_model(m));
      const RunConfig c = build_config(cmp_f, std::nullopt, "compare");
      const auto rows = compare(c, models, &std::cout);
      std::cout << "ranking:";
      for (const SweepRow& r : rows) std::cout << ' ' << r.label;
      std::cout << '\n';
    } else if (*smp) {
      const Preset ps = preset(sample_example);
      const AdeProblem& pr = ps.problem;
      const Domain dom = pr.domain.training_domain();
      const auto dir = resolve_out(sample_out, sample_example + "_samples_s" + std::to_string(sample_seed));
      std::filesystem::create_directories(dir);
      const SampleBatch batches[] = {
          sample_interior(dom, pr.bc.t0, pr.bc.t_end, s_nr, sample_seed),
          sample_boundary(dom, pr.bc.t0, pr.bc.t_end, s_nb, sample_seed),
          sample_initial(dom, pr.bc.t0, s_ni, sample_seed),
          test_grid(pr.domain, pr.bc.t0, pr.bc.t_end, ps.test),
      };
      for (const SampleBatch& b : batches) {
        const auto path = dir / (std::string(to_string(b.role)) + ".csv");
        std::ofstream out(path);
        if (!out) throw Error(ErrorKind::io_failure, "cannot write " + path.string());
        write_batch_csv(out, b);
      }
      std::cout << "samples in " << dir.string() << '\n';
    } else if (*orc) {
      const Preset ps = preset(oracle_example);
      const FdGrid g = crank_nicolson_1d(ps.problem, nx, nt);
      const auto dir = resolve_out(oracle_out, oracle_example + "_oracle");
      std::filesystem::create_directories(dir);
      std::ofstream out(dir / "oracle.csv");
      if (!out) throw Error(ErrorKind::io_failure, "cannot write oracle.csv");
      write_grid_csv(out, g);
      const ErrorSummary s = cross_check(ps.problem.exact, g);
      std::cout << "exact vs grid: mse " << format_double(s.mse) << "  rel " << format_double(s.rel) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
