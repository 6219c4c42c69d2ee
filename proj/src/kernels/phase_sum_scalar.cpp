#include <cmath>

#include "mellinstop/kernels/phase_sum.hpp"

namespace mellinstop {
namespace kernels {

namespace {
constexpr std::size_t kRefresh = 256;  // rotation re-seed interval (points)
}

void phase_sum_scalar(const double* log_vals, const double* weights,
                      std::size_t n, double step, std::size_t m,
                      double* out_re, double* out_im) {
  for (std::size_t k = 0; k < n; ++k) {
    const double lk = log_vals[k];
    const double wk = weights[k];
    const double theta = step * lk;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    double x = wk;  // wk * cos(0)
    double y = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j != 0 && (j % kRefresh) == 0) {
        const double phi = static_cast<double>(j) * theta;
        x = wk * std::cos(phi);
        y = wk * std::sin(phi);
      }
      out_re[j] += x;
      out_im[j] += y;
      const double xn = x * c - y * s;
      y = x * s + y * c;
      x = xn;
    }
  }
}

}  // namespace kernels
}  // namespace mellinstop
