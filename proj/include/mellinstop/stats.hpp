#pragma once

#include <vector>

namespace mellinstop {
namespace stats {

double normal_cdf(double z);

/// Type-7 (linear interpolation) quantile of a sample; p in [0, 1].
double quantile(std::vector<double> values, double p);

double mean(const std::vector<double>& values);
double sample_sd(const std::vector<double>& values);

/// One-sample Kolmogorov-Smirnov distance to the standard normal CDF.
double ks_vs_standard_normal(std::vector<double> values);

/// Two-sample Kolmogorov-Smirnov distance.
double two_sample_ks(std::vector<double> a, std::vector<double> b);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double half_width = 0.0;  // 1.96 * SE of the slope
};

/// OLS slope of y on x.  When y_sd is nonempty it carries the per-point
/// measurement standard deviations and the slope SE is propagated from them;
/// otherwise the SE comes from the regression residuals.
SlopeFit ols_slope(const std::vector<double>& x, const std::vector<double>& y,
                   const std::vector<double>& y_sd = {});

}  // namespace stats
}  // namespace mellinstop
