#pragma once
/**
 * @file experiment.hpp
 * @brief Run configurations, artifact emission, sweeps and model comparisons
 *        behind the command-line runner.
 *
 * A run directory holds exactly config.json (the effective configuration),
 * history.csv, summary.csv, error_field.csv and checkpoint.json.
 */

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "adepinn/training.hpp"

namespace adepinn {

struct RunConfig {
  std::string example = "ex1";
  ModelKind model = ModelKind::sfhcpinn;
  bool paper_scale = false;  ///< switches unset sizes to the full published settings
  std::optional<long> epochs;
  std::optional<Eigen::Index> n_r, n_b, n_i;
  std::uint64_t seed = 0;
  long eval_every = 1000;
  bool resample = true;

  // Network overrides; unset values follow the model's defaults.
  std::optional<std::vector<int>> hidden_sizes;
  std::optional<ActivationKind> activation;
  std::optional<std::vector<double>> scale_factors;
  std::optional<bool> fourier;
  bool trainable_fourier = true;
  Combination combination = Combination::fixed_average;

  // Schedules.
  double lr0 = 0.01;
  double lr_decay = 0.975;
  long lr_every = 100;
  std::optional<double> gamma0;  ///< default 20 at paper scale, 1 at desk scale
  std::optional<double> omega0;  ///< defaults to the resolved gamma0
  bool omega_scheduled = true;

  // sfhcpinn_nn fitting.
  int fit_steps = 3000;
  Eigen::Index fit_samples = 1000;

  PresetOptions preset_options;
  nlohmann::json problem;  ///< custom problem definition; null selects the preset `example`
  std::filesystem::path out;

  void validate() const;
};

/// Keys mirror the RunConfig fields; unknown keys raise InvalidConfig.
RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base = {});
/// Effective configuration with every default resolved.
nlohmann::json run_config_to_json(const RunConfig& c);

/**
 * Custom problem from JSON:
 *   {"id", "lower": [...], "upper": [...], "p", "q": [...],
 *    "exact": {"name", "params": [...]}, "faces": ["dirichlet" | "neumann", ...],
 *    "t0", "t_end"}
 * D is the normalized box distance to the Dirichlet faces times the time
 * factor and G the initial lift of the exact solution, so hard models need
 * Dirichlet data that does not change in time.
 */
Preset custom_preset(const nlohmann::json& j, const PresetOptions& opts = {});

Preset resolve_problem(const RunConfig& c);
EnsembleSpec resolve_network(const RunConfig& c, int input_dim);
TrainConfig make_train_config(const RunConfig& c);

struct RunOutcome {
  std::filesystem::path dir;
  ErrorSummary summary;
  std::size_t history_rows = 0;
};

/// Trains and writes the five run artifacts into `c.out` (created if needed).
RunOutcome run_experiment(const RunConfig& c, std::ostream* log = nullptr);

enum class SweepAxis { activation, hidden_sizes, lr0 };
SweepAxis parse_sweep_axis(std::string_view name);
std::string_view to_string(SweepAxis axis);

struct SweepRow {
  std::string label;
  bool ok = false;
  ErrorSummary summary;
  std::string error;  ///< failure message when !ok
};

/// Applies one sweep value ("sin", "10,20,10", "0.005") to a copy of `base`.
RunConfig apply_sweep_value(const RunConfig& base, SweepAxis axis, const std::string& value);

/// One run per value in subdirectories of `base.out`; writes sweep.csv ranked by REL.
std::vector<SweepRow> sweep(const RunConfig& base, SweepAxis axis, const std::vector<std::string>& values,
                            std::ostream* log = nullptr);

/// Identical budget and seed per model; writes compare.csv ranked by REL.
std::vector<SweepRow> compare(const RunConfig& base, const std::vector<ModelKind>& models,
                              std::ostream* log = nullptr);

/// Rows ordered by REL, failures last; ties keep input order.
std::vector<SweepRow> rank_rows(std::vector<SweepRow> rows);
void write_ranking_csv(std::ostream& out, const std::string& key, const std::vector<SweepRow>& ranked);

void write_summary_csv(std::ostream& out, const ErrorSummary& s);

}  // namespace adepinn
