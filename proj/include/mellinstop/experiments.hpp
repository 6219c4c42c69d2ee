#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "mellinstop/estimator.hpp"

namespace mellinstop {

inline constexpr const char* kVersion = "mellinstop 1.0.0";

enum class ExperimentKind {
  LossBoxplot,
  RateSlope,
  Normality,
  MinimaxDecay,
  OracleRoundtrip
};

ExperimentKind experiment_from_string(const std::string& name);
const char* experiment_name(ExperimentKind kind);

struct XGrid {
  double lo = 0.1;
  double hi = 10.0;
  int points = 200;
  std::vector<double> values() const;
};

/// One experiment, fully determined by these fields plus base_seed.
/// Replicate k of a size-n run draws its seed as
/// derive_seed(base_seed, {kind, n, k}); within a replicate, observation i
/// uses sub-streams {0, i} (stopping time) and {1, i} (process marginal).
struct ExperimentSpec {
  ExperimentKind experiment = ExperimentKind::LossBoxplot;

  std::string process = "bessel";  // bessel | gaussian_ss | gamma_ss
  double d = 5.0;
  double H = 0.5;
  double sigma_shape = 2.0;

  std::string t_family = "gamma";
  std::vector<double> t_params = {2.0, 1.0};

  double gamma_line = 0.7;
  double beta_angle = 0.0;
  std::string rule = "auto";  // auto|bessel|gaussian|gamma|manual
  double manual_cutoff = 0.0;

  std::vector<long> n_list = {1000, 5000, 10000, 50000};
  int replicates = 100;
  XGrid x_grid;
  double x_eval = 1.0;

  std::vector<double> m_grid = {4, 5, 6, 7, 8};
  double minimax_delta = -1.0;  // < 0: validated halving search

  std::uint64_t base_seed = 1;
  int threads = 0;              // 0: hardware concurrency
  std::string kernel = "auto";  // auto|scalar|avx2

  ProcessModel make_process() const;
  StoppingTimeModel make_t_model() const;
  EstimatorConfig make_config(long n) const;
  void validate() const;
};

/// Spec with the per-experiment defaults applied (e.g. the minimax grid runs
/// at beta = pi/2 on bessel d=1; the round-trip grid is 50 points on
/// [0.05, 10]).
ExperimentSpec default_spec(ExperimentKind kind);

using Value = std::variant<std::int64_t, double, std::string>;

struct ExperimentReport {
  ExperimentSpec spec;
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;  // canonical order
  std::vector<std::pair<std::string, double>> summary;
  std::string version = kVersion;
};

ExperimentReport run_experiment(const ExperimentSpec& spec);
ExperimentReport run_loss_boxplot(const ExperimentSpec& spec);
ExperimentReport run_rate_slope(const ExperimentSpec& spec);
ExperimentReport run_normality(const ExperimentSpec& spec);
ExperimentReport run_minimax_decay(const ExperimentSpec& spec);
ExperimentReport run_oracle_roundtrip(const ExperimentSpec& spec);

/// Run fn(0..count-1) on a pool; results must go to preallocated slots so
/// thread count never changes output bytes.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn);

double summary_value(const ExperimentReport& report, const std::string& key);

}  // namespace mellinstop
