#include <atomic>
#include <stdexcept>

#include "mellinstop/kernels/phase_sum.hpp"

namespace mellinstop {
namespace kernels {

bool avx2_compiled_in() {
#if defined(MELLINSTOP_HAVE_AVX2)
  return true;
#else
  return false;
#endif
}

bool avx2_available() {
#if defined(MELLINSTOP_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

using Fn = void (*)(const double*, const double*, std::size_t, double,
                    std::size_t, double*, double*);

Fn resolve(Kind k) {
  switch (k) {
    case Kind::Scalar:
      return &phase_sum_scalar;
    case Kind::Avx2:
#if defined(MELLINSTOP_HAVE_AVX2)
      if (avx2_available()) return &phase_sum_avx2;
#endif
      throw std::invalid_argument("kernel 'avx2' not available on this host");
    case Kind::Auto:
    default:
#if defined(MELLINSTOP_HAVE_AVX2)
      if (avx2_available()) return &phase_sum_avx2;
#endif
      return &phase_sum_scalar;
  }
}

std::atomic<Fn> g_fn{nullptr};
std::atomic<Kind> g_kind{Kind::Auto};

Fn current() {
  Fn fn = g_fn.load(std::memory_order_acquire);
  if (!fn) {
    fn = resolve(Kind::Auto);
    g_kind.store(fn == &phase_sum_scalar ? Kind::Scalar : Kind::Avx2,
                 std::memory_order_relaxed);
    g_fn.store(fn, std::memory_order_release);
  }
  return fn;
}

}  // namespace

void set_kernel(Kind k) {
  Fn fn = resolve(k);
  g_kind.store(fn == &phase_sum_scalar ? Kind::Scalar : Kind::Avx2,
               std::memory_order_relaxed);
  g_fn.store(fn, std::memory_order_release);
}

Kind active_kernel() {
  current();
  return g_kind.load(std::memory_order_relaxed);
}

const char* kernel_name(Kind k) {
  switch (k) {
    case Kind::Scalar:
      return "scalar";
    case Kind::Avx2:
      return "avx2";
    default:
      return "auto";
  }
}

Kind kind_from_string(const std::string& name) {
  if (name == "auto") return Kind::Auto;
  if (name == "scalar") return Kind::Scalar;
  if (name == "avx2") return Kind::Avx2;
  throw std::invalid_argument("unknown kernel '" + name +
                              "' (expected auto|scalar|avx2)");
}

void phase_sum(const double* log_vals, const double* weights, std::size_t n,
               double step, std::size_t m, double* out_re, double* out_im) {
  current()(log_vals, weights, n, step, m, out_re, out_im);
}

}  // namespace kernels
}  // namespace mellinstop
