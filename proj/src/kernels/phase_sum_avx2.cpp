// Compiled with -mavx2 -mfma; only dispatched to after a cpuid check.

#include <cmath>

#include "mellinstop/kernels/phase_sum.hpp"

#if defined(MELLINSTOP_HAVE_AVX2)
#include <immintrin.h>

namespace mellinstop {
namespace kernels {

namespace {
constexpr std::size_t kRefreshVec = 64;  // 64 lane-steps = 256 grid points
}

void phase_sum_avx2(const double* log_vals, const double* weights,
                    std::size_t n, double step, std::size_t m, double* out_re,
                    double* out_im) {
  for (std::size_t k = 0; k < n; ++k) {
    const double lk = log_vals[k];
    const double wk = weights[k];
    const double theta = step * lk;
    std::size_t j = 0;

    if (m >= 4) {
      const double c4 = std::cos(4.0 * theta);
      const double s4 = std::sin(4.0 * theta);
      const __m256d vc = _mm256_set1_pd(c4);
      const __m256d vs = _mm256_set1_pd(s4);
      __m256d x, y;
      auto seed = [&](std::size_t base) {
        alignas(32) double xs[4], ys[4];
        for (int t = 0; t < 4; ++t) {
          const double phi = static_cast<double>(base + t) * theta;
          xs[t] = wk * std::cos(phi);
          ys[t] = wk * std::sin(phi);
        }
        x = _mm256_load_pd(xs);
        y = _mm256_load_pd(ys);
      };
      seed(0);
      std::size_t steps = 0;
      for (; j + 4 <= m; j += 4, ++steps) {
        if (steps == kRefreshVec) {
          seed(j);
          steps = 0;
        }
        _mm256_storeu_pd(out_re + j,
                         _mm256_add_pd(_mm256_loadu_pd(out_re + j), x));
        _mm256_storeu_pd(out_im + j,
                         _mm256_add_pd(_mm256_loadu_pd(out_im + j), y));
        // rotate all four lanes by 4*theta
        const __m256d xn = _mm256_fmsub_pd(x, vc, _mm256_mul_pd(y, vs));
        y = _mm256_fmadd_pd(x, vs, _mm256_mul_pd(y, vc));
        x = xn;
      }
    }
    for (; j < m; ++j) {
      const double phi = static_cast<double>(j) * theta;
      out_re[j] += wk * std::cos(phi);
      out_im[j] += wk * std::sin(phi);
    }
  }
}

}  // namespace kernels
}  // namespace mellinstop

#endif  // MELLINSTOP_HAVE_AVX2
