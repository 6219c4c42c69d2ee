#include "mellinstop/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mellinstop {
namespace stats {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("quantile: p outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - std::floor(h)) * (values[hi] - values[lo]);
}

double mean(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("mean: empty sample");
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc / static_cast<double>(values.size());
}

double sample_sd(const std::vector<double>& values) {
  if (values.size() < 2) throw std::invalid_argument("sample_sd: need n >= 2");
  const double m = mean(values);
  double acc = 0.0;
  for (double v : values) acc += (v - m) * (v - m);
  return std::sqrt(acc / (static_cast<double>(values.size()) - 1.0));
}

double ks_vs_standard_normal(std::vector<double> values) {
  if (values.empty())
    throw std::invalid_argument("ks_vs_standard_normal: empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = normal_cdf(values[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

double two_sample_ks(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("two_sample_ks: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

SlopeFit ols_slope(const std::vector<double>& x, const std::vector<double>& y,
                   const std::vector<double>& y_sd) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("ols_slope: need matching n >= 2");
  const double xbar = mean(x);
  const double ybar = mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - xbar) * (x[i] - xbar);
    sxy += (x[i] - xbar) * (y[i] - ybar);
  }
  if (sxx == 0.0) throw std::invalid_argument("ols_slope: degenerate x");

  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;

  double var_slope = 0.0;
  if (!y_sd.empty()) {
    if (y_sd.size() != y.size())
      throw std::invalid_argument("ols_slope: y_sd size mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double c = (x[i] - xbar) / sxx;
      var_slope += c * c * y_sd[i] * y_sd[i];
    }
  } else if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    var_slope = rss / (static_cast<double>(x.size()) - 2.0) / sxx;
  }
  fit.half_width = 1.96 * std::sqrt(var_slope);
  return fit;
}

}  // namespace stats
}  // namespace mellinstop
