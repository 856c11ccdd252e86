#pragma once

// Flat key = value experiment configuration. One decision per line, '#'
// comments, lists as comma-separated values, seed ranges as lo:hi. Unknown
// keys are format errors; invalid values are domain errors naming the field.

#include "stsbo/kernel.hpp"
#include "stsbo/scheduler.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace stsbo {

struct ExperimentConfig {
  // Objective source: built-in synthetic landscape on the charging grid, or a
  // tabular CSV.
  std::string objective = "synth";  // synth | csv
  std::string csv_path;

  // Charging-grid geometry (synth objective only).
  double t_f = kDefaultChargeTime;
  double i3_max = std::numeric_limits<double>::infinity();

  // Surrogate model. Observations are standardized against the objective
  // table before reaching the surrogate, so these are in standardized units.
  // Auto (empty / negative / zero where noted) resolves to: lengthscale
  // 4 axis steps per dimension, signal_variance 1, noise_variance
  // (noise_ratio * value mean / value std)^2.
  std::string kernel = "se";  // se | matern52
  std::vector<double> lengthscale;
  double signal_variance = 0;
  double noise_variance = -1;

  // Observation noise and run geometry.
  double noise_ratio = 0.05;
  std::vector<std::string> policy = {"ts", "sts"};
  std::vector<std::string> mode = {"sequential", "synchronous", "asynchronous"};
  std::vector<double> beta = {0.01, 0.05, 0.1, 1.0};
  int m_workers = 4;
  int z_count = 64;
  int ba_k_max = 100;
  double ba_tol = 1e-6;
  double budget_rounds = 10000;
  std::vector<std::uint64_t> seeds = {1,  2,  3,  4,  5,  6,  7,  8,  9,  10,
                                      11, 12, 13, 14, 15, 16, 17, 18, 19, 20};

  // Wall-time model: scale <= 0 means normalize so the grid-average true
  // value costs time_target_rounds.
  double time_scale = 0;
  double time_target_rounds = 100;
  std::string duration_basis = "observed";  // observed | true

  int curve_points = 200;
  std::string out_dir = "out";
};

// Parse a config file; keys not listed above are FormatErrors.
ExperimentConfig parse_config_file(const std::string& path);

// Apply one "key=value" override (the --set flag).
void apply_override(ExperimentConfig& config, const std::string& assignment);

// Field-by-field validation; throws DomainError naming the offending field.
void validate(const ExperimentConfig& config);

// Method tag used in output filenames, e.g. ("sts", synchronous) -> "STS-PBO-syn".
std::string variant_tag(const std::string& policy, Mode mode);

Mode mode_from_name(const std::string& name);

// Ground-truth table named by the config: the built-in synthetic landscape on
// the charging grid (with feasibility masking when i3_max is finite), or a
// CSV table.
TabularObjective build_objective(const ExperimentConfig& config);

// Per-run model pieces resolved from config + objective, applying the auto
// defaults documented on ExperimentConfig.
struct ResolvedModel {
  KernelSpec<double> kernel;
  double noise_variance = 0;
  ValueTransform transform;
  NoiseModel noise;
  TimeModel time_model;
  DurationBasis basis = DurationBasis::observed;
};

ResolvedModel resolve_model(const ExperimentConfig& config, const TabularObjective& objective);

}  // namespace stsbo
