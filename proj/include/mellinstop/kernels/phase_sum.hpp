#pragma once

#include <cstddef>
#include <string>

namespace mellinstop {
namespace kernels {

// Weighted phase accumulation on a uniform frequency grid:
//
//   out_re[j] += sum_k  w[k] * cos(j * step * l[k])
//   out_im[j] += sum_k  w[k] * sin(j * step * l[k])     j = 0 .. m-1
//
// This is the inner loop of the empirical Mellin transform evaluated on the
// estimator's master grid (l[k] = ln X_k / H, w[k] = X_k^{(gamma-1)/H}); cost
// is n x m.  Both variants march the phase with a complex rotation per grid
// step and re-seed from libm sincos every 256 points to cap drift.
//
// The scalar kernel is the reference; the AVX2 kernel processes four grid
// points per lane-step.  Selection happens once at runtime (cpuid) and can be
// overridden for testing or reproducibility studies.

enum class Kind { Auto, Scalar, Avx2 };

bool avx2_available();
bool avx2_compiled_in();

/// Override kernel selection; throws std::invalid_argument if `k` names a
/// variant that is unavailable on this machine/build.
void set_kernel(Kind k);

/// The variant phase_sum() currently dispatches to (never Auto).
Kind active_kernel();

const char* kernel_name(Kind k);
Kind kind_from_string(const std::string& name);

void phase_sum(const double* log_vals, const double* weights, std::size_t n,
               double step, std::size_t m, double* out_re, double* out_im);

void phase_sum_scalar(const double* log_vals, const double* weights,
                      std::size_t n, double step, std::size_t m,
                      double* out_re, double* out_im);

void phase_sum_avx2(const double* log_vals, const double* weights,
                    std::size_t n, double step, std::size_t m, double* out_re,
                    double* out_im);

}  // namespace kernels
}  // namespace mellinstop
