#pragma once

#include <optional>
#include <vector>

#include "mellinstop/mellin.hpp"
#include "mellinstop/processes.hpp"
#include "mellinstop/stopping_times.hpp"

namespace mellinstop {

// Cut-off sequences g_n regularizing the inversion integral.  The gaussian
// and gamma variants branch on gamma_line (hi/lo) with slightly different
// log-log corrections; negative evaluations are clipped to 0 with a warning.
enum class CutoffVariant {
  BesselRule,          // ln n / (pi + 2 beta)
  GaussianRuleHiGamma, // 2H ln n / (pi + 4 H beta)
  GaussianRuleLoGamma, // (2H ln n - 2(gamma-1) ln ln n) / (pi + 4 H beta)
  GammaRuleHiGamma,    // ln n / (pi/H + 2 beta)
  GammaRuleLoGamma,    // (ln n - (1 - 2(gamma+sigma H-1)/H) ln ln n) / (pi/H + 2 beta)
  Manual
};

struct CutoffRule {
  CutoffVariant variant = CutoffVariant::BesselRule;
  double manual_value = 0.0;

  static CutoffRule manual(double g) {
    return CutoffRule{CutoffVariant::Manual, g};
  }
};

double cutoff_value(const CutoffRule& rule, long n, double H,
                    double beta_angle, double gamma_line,
                    std::optional<double> sigma_shape = std::nullopt);

/// The branch-appropriate rule for a process at a given gamma.
CutoffRule auto_rule(const ProcessModel& process, double gamma_line);

struct EstimatorConfig {
  ProcessModel process;
  double gamma_line = 0.7;
  CutoffRule rule{};
  double beta_angle = 0.0;
  long n_hint = 0;  // sample size used by the rule when it cannot be inferred

  /// Throws on hard errors (denominator strip violations); returns
  /// admissibility warnings for the rate-theorem side conditions.
  std::vector<std::string> validate() const;

  double resolved_cutoff(std::size_t batch_size) const;
};

/// One batch prepared for repeated evaluation: the empirical Mellin transform
/// is accumulated once on a fine master grid in v (step ~0.005, capped at 64k
/// points, interval count a multiple of 24) and divided by the process
/// marginal transform; each evaluation then runs a strided Simpson rule whose
/// step follows the oscillation scale 1 + |ln x|.
class DensityEstimate {
 public:
  DensityEstimate(const EstimatorConfig& config, const SampleBatch& batch);

  /// Oracle mode: the empirical ratio is replaced by the exact M[T] on the
  /// gamma line, making the evaluation a truncated Mellin inversion.
  DensityEstimate(const EstimatorConfig& config,
                  const MellinFunction& t_mellin);

  double operator()(double x) const;

  double cutoff() const { return cutoff_; }
  double grid_step() const { return h0_; }
  std::size_t grid_points() const { return ratio_.size(); }
  const std::vector<Complex>& line_ratio() const { return ratio_; }

 private:
  void build_grid();
  double gamma_line_;
  double H_;
  double cutoff_ = 0.0;
  double h0_ = 0.0;
  std::size_t intervals_ = 0;
  std::vector<Complex> ratio_;
};

/// Raw (possibly negative) estimate of f_T(x) from one batch.
double estimate_density(const EstimatorConfig& config, const SampleBatch& batch,
                        double x);

/// Per-observation contribution; the batch mean of these equals
/// estimate_density (the estimator is a mean of iid integrals).
double z_integral(const EstimatorConfig& config, double x_obs, double x);

/// Clip-at-zero-and-renormalize post-processing on a grid (presentation only;
/// the raw estimator is what the analysis covers).
std::vector<double> clip_and_renormalize(const std::vector<double>& x_grid,
                                         const std::vector<double>& f_values);

struct NormalityQuantities {
  double nu_n = 0.0;    // theoretical Var[Z_{n,1}] at the configured n
  double c_const = 0.0; // (pi/2) Gamma(2 gamma + (d-4)/2) M[T](2 gamma - 1)
  std::vector<double> z_values;  // realized Z integrals (filled by callers)
};

/// Asymptotic-normality quantities for the Bessel estimator; throws
/// hypothesis_error listing every violated condition.
NormalityQuantities normality_quantities(const EstimatorConfig& config,
                                         const StoppingTimeModel& t_model,
                                         double x);

}  // namespace mellinstop
