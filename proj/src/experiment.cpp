#include "adepinn/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "adepinn/checkpoint.hpp"
#include "adepinn/csv.hpp"

namespace adepinn {

namespace {

using nlohmann::json;

bool is_three_dim(const std::string& example) { return example == "ex6" || example == "ex7"; }

/// Published boundary batch sizes: 4000 for ex1, ex6 and ex7, 3000 elsewhere.
Eigen::Index paper_n_b(const std::string& example) {
  return example == "ex1" || is_three_dim(example) ? 4000 : 3000;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw Error(ErrorKind::io_failure, "cannot write " + p.string());
  return out;
}

std::vector<double> paper_scales() {
  std::vector<double> s;
  for (int i = 1; i <= 20; ++i) s.push_back(i);
  return s;
}

template <class T>
void read_opt(const json& j, const char* key, std::optional<T>& dst) {
  if (j.contains(key) && !j.at(key).is_null()) dst = j.at(key).get<T>();
}

template <class T>
void read(const json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

template <class T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> out;
  std::string tok;
  std::stringstream ss(text);
  while (std::getline(ss, tok, text.find('x') != std::string::npos ? 'x' : ',')) {
    const double v = parse_double(tok);
    if (v != std::floor(v) || v < 1) throw Error(ErrorKind::invalid_config, "bad hidden size '" + tok + "'");
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw Error(ErrorKind::invalid_config, "empty hidden sizes");
  return out;
}

std::string safe_label(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '/' || c == ' ') c = 'x';
  }
  return s;
}

}  // namespace

void RunConfig::validate() const {
  if (epochs && *epochs < 0) throw Error(ErrorKind::invalid_config, "epochs must be >= 0");
  for (const auto* n : {&n_r, &n_b, &n_i}) {
    if (*n && **n < 1) throw Error(ErrorKind::invalid_config, "batch sizes must be >= 1");
  }
  if (eval_every < 1) throw Error(ErrorKind::invalid_config, "eval_every must be >= 1");
  if (!(lr0 > 0.0) || !(lr_decay > 0.0) || lr_every < 1) {
    throw Error(ErrorKind::invalid_config, "invalid learning-rate schedule");
  }
  if (fit_steps < 0 || fit_samples < 1) throw Error(ErrorKind::invalid_config, "invalid fit settings");
  if (problem.is_null() && std::find(preset_ids().begin(), preset_ids().end(), example) == preset_ids().end()) {
    throw Error(ErrorKind::unknown_preset, "unknown example '" + example + "'");
  }
}

RunConfig run_config_from_json(const json& j, RunConfig c) {
  static const std::set<std::string> known{
      "example", "model", "paper_scale", "epochs", "n_r", "n_b", "n_i", "seed", "eval_every", "resample",
      "hidden_sizes", "activation", "scale_factors", "fourier", "trainable_fourier", "combination", "lr0",
      "lr_decay", "lr_every", "gamma0", "omega0", "omega_scheduled", "fit_steps", "fit_samples",
      "literal_distance", "literal_extension", "test_count", "test_resolution", "test_seed", "problem", "out"};
  if (!j.is_object()) throw Error(ErrorKind::invalid_config, "config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw Error(ErrorKind::invalid_config, "unknown config key '" + key + "'");
  }
  try {
    read(j, "example", c.example);
    if (j.contains("model")) c.model = parse_model(j.at("model").get<std::string>());
    read(j, "paper_scale", c.paper_scale);
    read_opt(j, "epochs", c.epochs);
    read_opt(j, "n_r", c.n_r);
    read_opt(j, "n_b", c.n_b);
    read_opt(j, "n_i", c.n_i);
    read(j, "seed", c.seed);
    read(j, "eval_every", c.eval_every);
    read(j, "resample", c.resample);
    read_opt(j, "hidden_sizes", c.hidden_sizes);
    if (j.contains("activation") && !j.at("activation").is_null()) {
      c.activation = parse_activation(j.at("activation").get<std::string>());
    }
    read_opt(j, "scale_factors", c.scale_factors);
    read_opt(j, "fourier", c.fourier);
    read(j, "trainable_fourier", c.trainable_fourier);
    if (j.contains("combination")) {
      const auto s = j.at("combination").get<std::string>();
      if (s == "fixed_average") {
        c.combination = Combination::fixed_average;
      } else if (s == "learned_head") {
        c.combination = Combination::learned_head;
      } else {
        throw Error(ErrorKind::invalid_config, "unknown combination '" + s + "'");
      }
    }
    read(j, "lr0", c.lr0);
    read(j, "lr_decay", c.lr_decay);
    read(j, "lr_every", c.lr_every);
    read_opt(j, "gamma0", c.gamma0);
    read_opt(j, "omega0", c.omega0);
    read(j, "omega_scheduled", c.omega_scheduled);
    read(j, "fit_steps", c.fit_steps);
    read(j, "fit_samples", c.fit_samples);
    read(j, "literal_distance", c.preset_options.literal_distance);
    read(j, "literal_extension", c.preset_options.literal_extension);
    read_opt(j, "test_count", c.preset_options.test_count);
    read_opt(j, "test_resolution", c.preset_options.test_resolution);
    read(j, "test_seed", c.preset_options.test_seed);
    if (j.contains("problem")) c.problem = j.at("problem");
    if (j.contains("out")) c.out = j.at("out").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::invalid_config, std::string("bad config value: ") + e.what());
  }
  return c;
}

json run_config_to_json(const RunConfig& c) {
  const TrainConfig tc = make_train_config(c);
  const MlpSpec& net = tc.network.subnet;
  return {{"example", c.problem.is_null() ? c.example : tc.problem.problem.id},
          {"model", std::string(to_string(c.model))},
          {"paper_scale", c.paper_scale},
          {"epochs", tc.epochs},
          {"n_r", tc.n_r},
          {"n_b", tc.n_b},
          {"n_i", tc.n_i},
          {"seed", c.seed},
          {"eval_every", c.eval_every},
          {"resample", c.resample},
          {"hidden_sizes", net.hidden_sizes},
          {"activation", std::string(to_string(net.hidden_activation))},
          {"scale_factors", tc.network.scale_factors},
          {"fourier", net.first_layer_activation == ActivationKind::fourier_pair},
          {"trainable_fourier", c.trainable_fourier},
          {"combination", c.combination == Combination::learned_head ? "learned_head" : "fixed_average"},
          {"lr0", c.lr0},
          {"lr_decay", c.lr_decay},
          {"lr_every", c.lr_every},
          {"gamma0", tc.weights.gamma0},
          {"omega0", tc.weights.omega0},
          {"omega_scheduled", c.omega_scheduled},
          {"fit_steps", c.fit_steps},
          {"fit_samples", c.fit_samples},
          {"literal_distance", c.preset_options.literal_distance},
          {"literal_extension", c.preset_options.literal_extension},
          {"test_count", opt_json(c.preset_options.test_count)},
          {"test_resolution", opt_json(c.preset_options.test_resolution)},
          {"test_seed", c.preset_options.test_seed},
          {"problem", c.problem},
          {"out", c.out.string()}};
}

Preset custom_preset(const json& j, const PresetOptions& opts) {
  try {
    const auto lo = j.at("lower").get<std::vector<double>>();
    const auto hi = j.at("upper").get<std::vector<double>>();
    if (lo.empty() || lo.size() != hi.size() || lo.size() > 3) {
      throw Error(ErrorKind::invalid_config, "custom problem needs 1 to 3 matching bounds");
    }
    const auto d = static_cast<Eigen::Index>(lo.size());
    const Eigen::VectorXd elo = Eigen::Map<const Eigen::VectorXd>(lo.data(), d);
    const Eigen::VectorXd ehi = Eigen::Map<const Eigen::VectorXd>(hi.data(), d);
    const Domain dom = d == 1 ? Domain::interval(lo[0], hi[0]) : Domain::box(elo, ehi);

    AdeCoefficients coeffs;
    coeffs.p = j.at("p").get<double>();
    const auto q = j.at("q").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(q.size()) != d) throw Error(ErrorKind::invalid_config, "q needs one entry per axis");
    coeffs.q = Eigen::Map<const Eigen::VectorXd>(q.data(), d);

    const json& ex = j.at("exact");
    const ScalarField exact =
        named_expression(ex.at("name").get<std::string>(), ex.value("params", std::vector<double>{}));

    std::vector<BcType> faces;
    for (const auto& s : j.at("faces").get<std::vector<std::string>>()) {
      if (s == "dirichlet") {
        faces.push_back(BcType::dirichlet);
      } else if (s == "neumann") {
        faces.push_back(BcType::neumann);
      } else {
        throw Error(ErrorKind::invalid_config, "unknown boundary type '" + s + "'");
      }
    }
    if (static_cast<int>(faces.size()) != dom.face_count()) {
      throw Error(ErrorKind::invalid_config, "faces needs " + std::to_string(dom.face_count()) + " entries");
    }
    const double t0 = j.value("t0", 0.0);
    const double t_end = j.value("t_end", 1.0);

    Preset ps;
    ps.problem = problem_from_exact(j.value("id", std::string("custom")), coeffs, dom, exact, faces, t0, t_end);
    const std::vector<int> dirichlet = ps.problem.bc.faces_of(BcType::dirichlet);
    ps.distance.eval = box_distance(dom, dirichlet, t0, t_end);
    ps.distance.vanishing = {dirichlet, true, t0};
    ps.extension.eval = initial_lift(exact, t0);
    ps.test.mode = SliceSpec::Mode::grid;
    ps.test.fixed.assign(static_cast<std::size_t>(d + 1), std::nullopt);
    // Two free coordinates: (x, t) in 1D, (x, y) at mid-time otherwise, z held at mid-height.
    if (d >= 2) ps.test.fixed.back() = 0.5 * (t0 + t_end);
    if (d == 3) ps.test.fixed[2] = 0.5 * (lo[2] + hi[2]);
    if (opts.test_resolution) ps.test.resolution = *opts.test_resolution;
    ps.description = "custom problem";
    return ps;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::invalid_config, std::string("bad custom problem: ") + e.what());
  }
}

Preset resolve_problem(const RunConfig& c) {
  return c.problem.is_null() ? preset(c.example, c.preset_options) : custom_preset(c.problem, c.preset_options);
}

EnsembleSpec resolve_network(const RunConfig& c, int input_dim) {
  EnsembleSpec e;
  e.subnet.input_dim = input_dim;
  if (c.model == ModelKind::pinn) {
    e.subnet.hidden_sizes = c.paper_scale ? std::vector<int>{100, 150, 80, 80, 50} : std::vector<int>{30, 30, 30};
    e.subnet.hidden_activation = ActivationKind::tanh;
    e.scale_factors = {1.0};
  } else {
    e.subnet.hidden_sizes = c.paper_scale ? std::vector<int>{10, 25, 20, 20, 10} : std::vector<int>{10, 20, 10};
    e.subnet.hidden_activation = ActivationKind::sin;
    e.scale_factors = c.paper_scale ? paper_scales() : std::vector<double>{1.0, 2.0, 3.0, 4.0};
  }
  if (c.hidden_sizes) e.subnet.hidden_sizes = *c.hidden_sizes;
  if (c.activation) e.subnet.hidden_activation = *c.activation;
  if (c.scale_factors) e.scale_factors = *c.scale_factors;
  const bool fourier = c.fourier.value_or(c.model != ModelKind::pinn);
  e.subnet.first_layer_activation = fourier ? ActivationKind::fourier_pair : e.subnet.hidden_activation;
  e.trainable_fourier = c.trainable_fourier;
  e.combination = c.combination;
  e.validate();
  return e;
}

TrainConfig make_train_config(const RunConfig& c) {
  c.validate();
  TrainConfig tc;
  tc.problem = resolve_problem(c);
  const int k = tc.problem.problem.input_dim();
  tc.model = c.model;
  tc.network = resolve_network(c, k);
  tc.epochs = c.epochs.value_or(c.paper_scale ? 50000 : 5000);
  const bool wide = tc.problem.problem.spatial_dim() == 3;
  tc.n_r = c.n_r.value_or(c.paper_scale ? (wide ? 15000 : 8000) : 2000);
  tc.n_b = c.n_b.value_or(c.paper_scale ? paper_n_b(c.example) : 500);
  tc.n_i = c.n_i.value_or(c.paper_scale ? 3000 : 500);
  tc.seed = c.seed;
  tc.eval_every = c.eval_every;
  tc.resample = c.resample;
  // The full staircase from 20 reaches 10000, which swamps the residual
  // gradient within a desk-scale budget; desk runs start the staircase at 1.
  tc.weights.gamma0 = c.gamma0.value_or(c.paper_scale ? 20.0 : 1.0);
  tc.weights.omega0 = c.omega0.value_or(tc.weights.gamma0);
  tc.weights.omega_scheduled = c.omega_scheduled;
  tc.lr = {c.lr0, c.lr_decay, c.lr_every};
  tc.fit_spec = default_fit_spec(k);
  tc.fit.steps = c.fit_steps;
  tc.fit.lr = c.lr0;
  tc.fit_samples = c.fit_samples;
  return tc;
}

void write_summary_csv(std::ostream& out, const ErrorSummary& s) {
  out << "mse,rel,max_abs,n_points\n"
      << format_double(s.mse) << ',' << format_double(s.rel) << ',' << format_double(s.max_abs) << ','
      << s.n_points << '\n';
}

RunOutcome run_experiment(const RunConfig& c, std::ostream* log) {
  TrainConfig tc = make_train_config(c);
  const std::filesystem::path dir = c.out.empty() ? std::filesystem::path("run") : c.out;
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "config.json");
    out << run_config_to_json(c).dump(2) << '\n';
  }
  if (log) {
    tc.on_eval = [log](const TrainRecord& r) {
      *log << "epoch " << r.epoch << "  loss " << format_double(r.loss_total) << "  mse "
           << format_double(r.mse) << "  rel " << format_double(r.rel) << std::endl;
    };
  }
  auto write_history = [&dir](const std::vector<TrainRecord>& h) {
    auto out = open_out(dir / "history.csv");
    write_history_csv(out, h);
  };

  TrainResult res = [&] {
    try {
      return train(tc);
    } catch (const TrainingDiverged& e) {
      write_history(e.history());
      save_checkpoint(dir / "checkpoint.json", e.last_good());
      throw;
    }
  }();

  write_history(res.history);
  {
    auto out = open_out(dir / "summary.csv");
    write_summary_csv(out, res.summary);
  }
  {
    auto out = open_out(dir / "error_field.csv");
    write_error_field_csv(out, error_field_from_values(res.test.points, res.test_prediction, res.test_exact));
  }
  save_checkpoint(dir / "checkpoint.json", res.params);
  if (log) {
    *log << "final mse " << format_double(res.summary.mse) << "  rel " << format_double(res.summary.rel) << '\n';
  }
  return {dir, res.summary, res.history.size()};
}

SweepAxis parse_sweep_axis(std::string_view name) {
  if (name == "activation") return SweepAxis::activation;
  if (name == "hidden_sizes") return SweepAxis::hidden_sizes;
  if (name == "lr0") return SweepAxis::lr0;
  throw Error(ErrorKind::invalid_config, "unknown sweep axis '" + std::string(name) + "'");
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::activation: return "activation";
    case SweepAxis::hidden_sizes: return "hidden_sizes";
    case SweepAxis::lr0: return "lr0";
  }
  return "unknown";
}

RunConfig apply_sweep_value(const RunConfig& base, SweepAxis axis, const std::string& value) {
  RunConfig c = base;
  switch (axis) {
    case SweepAxis::activation: c.activation = parse_activation(value); break;
    case SweepAxis::hidden_sizes: c.hidden_sizes = parse_sizes(value); break;
    case SweepAxis::lr0: c.lr0 = parse_double(value); break;
  }
  return c;
}

std::vector<SweepRow> rank_rows(std::vector<SweepRow> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.ok != b.ok) return a.ok;
    return a.ok && a.summary.rel < b.summary.rel;
  });
  return rows;
}

void write_ranking_csv(std::ostream& out, const std::string& key, const std::vector<SweepRow>& ranked) {
  out << "rank," << key << ",status,mse,rel,max_abs\n";
  int rank = 1;
  for (const SweepRow& r : ranked) {
    out << rank++ << ',' << r.label << ',' << (r.ok ? "ok" : "failed") << ',';
    if (r.ok) {
      out << format_double(r.summary.mse) << ',' << format_double(r.summary.rel) << ','
          << format_double(r.summary.max_abs) << '\n';
    } else {
      out << "nan,nan,nan\n";
    }
  }
}

std::vector<SweepRow> sweep(const RunConfig& base, SweepAxis axis, const std::vector<std::string>& values,
                            std::ostream* log) {
  if (values.empty()) throw Error(ErrorKind::invalid_config, "sweep needs at least one value");
  std::vector<SweepRow> rows;
  for (const std::string& v : values) {
    SweepRow row;
    row.label = safe_label(v);
    try {
      RunConfig c = apply_sweep_value(base, axis, v);
      c.out = base.out / (std::string(to_string(axis)) + "_" + row.label);
      if (log) *log << "sweep " << to_string(axis) << " = " << v << '\n';
      row.summary = run_experiment(c, log).summary;
      row.ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
      if (log) *log << "run failed: " << row.error << '\n';
    }
    rows.push_back(std::move(row));
  }
  rows = rank_rows(std::move(rows));
  std::filesystem::create_directories(base.out);
  auto out = open_out(base.out / "sweep.csv");
  write_ranking_csv(out, std::string(to_string(axis)), rows);
  return rows;
}

std::vector<SweepRow> compare(const RunConfig& base, const std::vector<ModelKind>& models, std::ostream* log) {
  if (models.size() < 2) throw Error(ErrorKind::invalid_config, "compare needs at least two models");
  std::vector<SweepRow> rows;
  for (ModelKind m : models) {
    RunConfig c = base;
    c.model = m;
    c.out = base.out / std::string(to_string(m));
    if (log) *log << "model " << to_string(m) << '\n';
    SweepRow row;
    row.label = std::string(to_string(m));
    row.summary = run_experiment(c, log).summary;
    row.ok = true;
    rows.push_back(std::move(row));
  }
  rows = rank_rows(std::move(rows));
  std::filesystem::create_directories(base.out);
  auto out = open_out(base.out / "compare.csv");
  write_ranking_csv(out, "model", rows);
  return rows;
}

}  // namespace adepinn
