#include "mellinstop/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "mellinstop/kernels/phase_sum.hpp"
#include "mellinstop/quadrature.hpp"
#include "mellinstop/special_functions.hpp"
#include "mellinstop/warnings.hpp"

namespace mellinstop {

namespace {
constexpr double kBaseStep = 0.005;
constexpr std::size_t kMaxIntervals = 65520;  // 24 * 2730, ~64k grid points
}  // namespace

double cutoff_value(const CutoffRule& rule, long n, double H,
                    double beta_angle, double gamma_line,
                    std::optional<double> sigma_shape) {
  if (rule.variant == CutoffVariant::Manual) {
    if (rule.manual_value < 0.0)
      throw std::invalid_argument("cutoff_value: manual cutoff must be >= 0");
    return rule.manual_value;
  }
  if (n < 2) throw std::invalid_argument("cutoff_value: requires n >= 2");
  require_positive(H, "cutoff_value: H");
  if (beta_angle < 0.0)
    throw std::invalid_argument("cutoff_value: beta_angle must be >= 0");

  const double ln_n = std::log(static_cast<double>(n));
  const double lln_n = std::log(ln_n);
  double g = 0.0;
  switch (rule.variant) {
    case CutoffVariant::BesselRule:
      g = ln_n / (kPi + 2.0 * beta_angle);
      break;
    case CutoffVariant::GaussianRuleHiGamma:
      g = 2.0 * H * ln_n / (kPi + 4.0 * H * beta_angle);
      break;
    case CutoffVariant::GaussianRuleLoGamma:
      g = (2.0 * H * ln_n - 2.0 * (gamma_line - 1.0) * lln_n) /
          (kPi + 4.0 * H * beta_angle);
      break;
    case CutoffVariant::GammaRuleHiGamma:
      g = ln_n / (kPi / H + 2.0 * beta_angle);
      break;
    case CutoffVariant::GammaRuleLoGamma: {
      if (!sigma_shape)
        throw std::invalid_argument(
            "cutoff_value: gamma_rule_lo requires sigma_shape");
      const double sh = *sigma_shape;
      const double corr = 1.0 - 2.0 * (gamma_line + sh * H - 1.0) / H;
      g = (ln_n - corr * lln_n) / (kPi / H + 2.0 * beta_angle);
      break;
    }
    default:
      break;
  }
  if (g < 0.0) {
    warn("cutoff_value: rule produced negative g_n, clipping to 0");
    g = 0.0;
  }
  return g;
}

CutoffRule auto_rule(const ProcessModel& process, double gamma_line) {
  switch (process.family()) {
    case ProcessFamily::Bessel:
      return CutoffRule{CutoffVariant::BesselRule, 0.0};
    case ProcessFamily::GaussianSS:
      return CutoffRule{gamma_line >= 1.0 ? CutoffVariant::GaussianRuleHiGamma
                                          : CutoffVariant::GaussianRuleLoGamma,
                        0.0};
    default:
      return CutoffRule{gamma_line + process.sigma_shape() * process.H() >=
                                1.0 + process.H() / 2.0
                            ? CutoffVariant::GammaRuleHiGamma
                            : CutoffVariant::GammaRuleLoGamma,
                        0.0};
  }
}

std::vector<std::string> EstimatorConfig::validate() const {
  require_finite(gamma_line, "EstimatorConfig: gamma_line");
  const double H = process.H();

  // Denominator strip membership is structural: the estimator divides by
  // M[|Y_1|]((gamma+H-1+iv)/H) along the whole line.
  const double s_re = (gamma_line + H - 1.0) / H;
  process.marginal_strip().require(s_re, "EstimatorConfig: denominator");

  std::vector<std::string> warnings;
  if (gamma_line <= 1.0 - H)
    throw std::invalid_argument(
        "EstimatorConfig: gamma_line must exceed 1 - H for the inversion "
        "identity to hold");
  if (process.family() == ProcessFamily::Bessel) {
    const double d = process.dimension();
    const double lo = std::max(0.5, (4.0 - d) / 4.0);
    if (gamma_line <= lo)
      warnings.push_back(
          "gamma_line <= max{1/2, (4-d)/4}: rate theory for the Bessel "
          "estimator does not apply");
  }
  if (process.family() == ProcessFamily::GaussianSS && gamma_line <= 0.75)
    warnings.push_back(
        "gamma_line <= 3/4: rate theory for the Gaussian estimator does not "
        "apply");
  return warnings;
}

double EstimatorConfig::resolved_cutoff(std::size_t batch_size) const {
  if (rule.variant == CutoffVariant::Manual) return rule.manual_value;
  const long n = n_hint > 0 ? n_hint : static_cast<long>(batch_size);
  std::optional<double> sigma;
  if (process.family() == ProcessFamily::GammaSS)
    sigma = process.sigma_shape();
  return cutoff_value(rule, n, process.H(), beta_angle, gamma_line, sigma);
}

void DensityEstimate::build_grid() {
  if (cutoff_ <= 0.0) {
    intervals_ = 0;
    h0_ = 0.0;
    return;
  }
  // Interval count: multiple of 24 so strides {1,2,3,4} all leave an even
  // Simpson count; capped at ~64k points.
  const double raw = cutoff_ / kBaseStep;
  std::size_t n24 = static_cast<std::size_t>(std::ceil(raw / 24.0)) * 24;
  intervals_ = std::clamp<std::size_t>(n24, 24, kMaxIntervals);
  h0_ = cutoff_ / static_cast<double>(intervals_);
}

DensityEstimate::DensityEstimate(const EstimatorConfig& config,
                                 const SampleBatch& batch)
    : gamma_line_(config.gamma_line), H_(config.process.H()) {
  for (const std::string& w : config.validate()) warn(w);
  cutoff_ = config.resolved_cutoff(batch.size());
  build_grid();
  if (intervals_ == 0) return;

  const std::size_t n = batch.size();
  const std::size_t m = intervals_ + 1;

  // l_k = ln X_k / H, w_k = X_k^{(gamma-1)/H}; the empirical transform on
  // the grid is then a weighted phase sum, the kernel's job.
  std::vector<double> logs(n), weights(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double l = std::log(batch.values()[k]) / H_;
    logs[k] = l;
    weights[k] = std::exp((gamma_line_ - 1.0) * l);
  }
  std::vector<double> acc_re(m, 0.0), acc_im(m, 0.0);
  kernels::phase_sum(logs.data(), weights.data(), n, h0_ / H_, m,
                     acc_re.data(), acc_im.data());

  const double s_re = (gamma_line_ + H_ - 1.0) / H_;
  ratio_.resize(m);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < m; ++j) {
    const double v = h0_ * static_cast<double>(j);
    const Complex denom =
        config.process.marginal_mellin(Complex(s_re, v / H_));
    ratio_[j] = Complex(acc_re[j] * inv_n, acc_im[j] * inv_n) / denom;
  }
}

DensityEstimate::DensityEstimate(const EstimatorConfig& config,
                                 const MellinFunction& t_mellin)
    : gamma_line_(config.gamma_line), H_(config.process.H()) {
  for (const std::string& w : config.validate()) warn(w);
  t_mellin.strip.require(gamma_line_, "DensityEstimate(oracle)");
  cutoff_ = config.resolved_cutoff(0);
  build_grid();
  if (intervals_ == 0) return;

  const std::size_t m = intervals_ + 1;
  ratio_.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double v = h0_ * static_cast<double>(j);
    ratio_[j] = t_mellin(Complex(gamma_line_, v));
  }
}

double DensityEstimate::operator()(double x) const {
  require_positive(x, "DensityEstimate: x");
  if (intervals_ == 0) return 0.0;

  const double lnx = std::log(x);
  const double h_target = std::min(0.02, 0.25 / (1.0 + std::abs(lnx)));
  const std::size_t stride = static_cast<std::size_t>(
      std::clamp(std::floor(h_target / h0_), 1.0, 4.0));
  const std::size_t count = intervals_ / stride + 1;  // strided grid points
  const double step = h0_ * static_cast<double>(stride);

  // e^{-i v_j ln x} on the strided grid via the same phase kernel
  // (single observation with l = -ln x, unit weight).
  std::vector<double> ph_re(count, 0.0), ph_im(count, 0.0);
  const double l = -lnx;
  const double w = 1.0;
  kernels::phase_sum(&l, &w, 1, step, count, ph_re.data(), ph_im.data());

  Complex acc(0.0, 0.0);
  for (std::size_t j = 0; j < count; ++j) {
    const double sw =
        (j == 0 || j + 1 == count) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
    acc += sw * ratio_[j * stride] * Complex(ph_re[j], ph_im[j]);
  }
  acc *= step / 3.0;

  // Full-range integral is twice the real part of the half-range one by
  // conjugate symmetry.
  return std::pow(x, -gamma_line_) / kPi * acc.real();
}

double estimate_density(const EstimatorConfig& config, const SampleBatch& batch,
                        double x) {
  return DensityEstimate(config, batch)(x);
}

double z_integral(const EstimatorConfig& config, double x_obs, double x) {
  require_positive(x_obs, "z_integral: x_obs");
  if (config.rule.variant != CutoffVariant::Manual && config.n_hint < 2)
    throw std::invalid_argument(
        "z_integral: config.n_hint must carry the batch size for the rule");
  SampleBatch single = SampleBatch::from_values({x_obs}, "z_integral");
  return DensityEstimate(config, single)(x);
}

std::vector<double> clip_and_renormalize(const std::vector<double>& x_grid,
                                         const std::vector<double>& f_values) {
  if (x_grid.size() != f_values.size() || x_grid.size() < 2)
    throw std::invalid_argument(
        "clip_and_renormalize: grids must match and have >= 2 points");
  std::vector<double> clipped(f_values.size());
  for (std::size_t i = 0; i < f_values.size(); ++i)
    clipped[i] = std::max(0.0, f_values[i]);
  double mass = 0.0;  // trapezoid on the supplied grid
  for (std::size_t i = 1; i < x_grid.size(); ++i)
    mass += 0.5 * (clipped[i] + clipped[i - 1]) * (x_grid[i] - x_grid[i - 1]);
  if (mass > 0.0)
    for (double& v : clipped) v /= mass;
  return clipped;
}

NormalityQuantities normality_quantities(const EstimatorConfig& config,
                                         const StoppingTimeModel& t_model,
                                         double x) {
  require_positive(x, "normality_quantities: x");
  std::vector<std::string> failures;

  if (config.process.family() != ProcessFamily::Bessel)
    throw std::invalid_argument(
        "normality_quantities: requires a Bessel process config");
  const double d = config.process.dimension();
  const double g = config.gamma_line;
  const MellinStrip strip = t_model.strip();

  if (!strip.contains(g))
    failures.push_back("gamma not in T's Mellin strip");
  if (!strip.contains(2.0 * g - 1.0))
    failures.push_back("2*gamma - 1 not in T's Mellin strip");
  if (!(g > (4.0 - d) / 4.0))
    failures.push_back("gamma <= (4-d)/4");

  std::vector<double> deltas = {0.1, 0.5, 1.0, 2.0};
  if (g < 1.0) deltas.push_back(2.0 * g / (1.0 - g) + 0.1);
  bool delta_ok = false;
  for (double delta : deltas) {
    if (strip.contains((delta + 2.0) * g - delta - 1.0)) {
      delta_ok = true;
      break;
    }
  }
  if (!delta_ok)
    failures.push_back(
        "no delta > 0 with (delta+2)*gamma - delta - 1 in T's strip");

  if (config.n_hint < 2 && config.rule.variant != CutoffVariant::Manual)
    failures.push_back("n_hint < 2: cannot evaluate the cut-off rule");

  double gn = 0.0;
  if (failures.empty()) {
    gn = config.resolved_cutoff(0);
    if (!(gn > 1.0))
      failures.push_back("g_n <= 1: log^{-2}(g_n) in nu_n is meaningless");
  }

  // Line integrability of M[T] on Re = 2 gamma - 1, checked numerically.
  if (failures.empty()) {
    const double c_line = 2.0 * g - 1.0;
    quad::Options opt;
    opt.abs_tol = 1e-9;
    opt.rel_tol = 1e-7;
    const double i40 = quad::integrate(
                           [&](double v) {
                             return std::abs(t_model.mellin(Complex(c_line, v)));
                           },
                           0.0, 40.0, opt)
                           .value;
    const double edge = std::abs(t_model.mellin(Complex(c_line, 40.0)));
    if (edge * 80.0 > 0.05 * i40 + 1e-12)
      failures.push_back(
          "integral of |M[T](2 gamma - 1 + iv)| does not appear finite "
          "(slow decay at v = 40)");
  }

  if (!failures.empty()) {
    std::string msg = "normality_quantities: hypothesis violations:";
    for (const std::string& f : failures) msg += "\n  - " + f;
    throw hypothesis_error(msg);
  }

  NormalityQuantities out;
  const double mt = t_model.mellin(Complex(2.0 * g - 1.0, 0.0)).real();
  out.c_const = kPi / 2.0 * std::exp(std::lgamma(2.0 * g + (d - 4.0) / 2.0)) * mt;
  const double log_gn = std::log(gn);
  out.nu_n = out.c_const * std::exp(std::lgamma(d / 2.0)) /
             (2.0 * kPi * kPi * kPi * std::pow(x, 2.0 * g)) *
             std::pow(gn, -2.0 * g + d - 3.0) * std::exp(kPi * gn) /
             (log_gn * log_gn);
  return out;
}

}  // namespace mellinstop
