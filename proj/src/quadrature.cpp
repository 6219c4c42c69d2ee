#include "mellinstop/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace mellinstop {
namespace quad {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489277062569368492550577,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <typename T>
struct Panel {
  double a, b;
  T value;
  double err;
  double l1;
};

template <typename T>
void gk15(const std::function<T(double)>& f, double a, double b, T& value,
          double& err, double& l1) {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (a + b);

  T fc = f(c);
  T kronrod = kWgk[7] * fc;
  T gauss = kWg[3] * fc;
  double resabs = kWgk[7] * std::abs(fc);

  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    T f1 = f(c - x);
    T f2 = f(c + x);
    kronrod += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  value = kronrod * h;
  l1 = resabs * std::abs(h);
  err = std::abs(kronrod - gauss) * std::abs(h);
  // quadpack-style sharpening of the raw |K15-G7| difference
  if (l1 > 0.0 && err > 0.0) {
    const double scaled = std::pow(200.0 * err / l1, 1.5);
    if (scaled < 1.0) err = l1 * scaled;
  }
}

template <typename T, typename R>
R run_adaptive(const std::function<T(double)>& f, double a, double b,
               const Options& opt) {
  R out;
  if (a == b) {
    out.converged = true;
    return out;
  }

  const double min_width = std::abs(b - a) * 0x1.0p-30;  // depth cap 30

  auto cmp = [](const Panel<T>& u, const Panel<T>& v) { return u.err < v.err; };
  std::priority_queue<Panel<T>, std::vector<Panel<T>>, decltype(cmp)> heap(cmp);

  Panel<T> root{a, b, T{}, 0.0, 0.0};
  gk15(f, a, b, root.value, root.err, root.l1);
  heap.push(root);

  T total = root.value;
  double total_err = root.err;
  double total_l1 = root.l1;
  int panels = 1;

  auto tolerance = [&]() {
    return std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
  };

  while (total_err > tolerance() && panels < opt.max_panels) {
    Panel<T> top = heap.top();
    if (top.b - top.a <= min_width) break;  // cannot refine further
    heap.pop();

    const double m = 0.5 * (top.a + top.b);
    Panel<T> left{top.a, m, T{}, 0.0, 0.0};
    Panel<T> right{m, top.b, T{}, 0.0, 0.0};
    gk15(f, left.a, left.b, left.value, left.err, left.l1);
    gk15(f, right.a, right.b, right.value, right.err, right.l1);

    total += left.value + right.value - top.value;
    total_err += left.err + right.err - top.err;
    total_l1 += left.l1 + right.l1 - top.l1;
    ++panels;

    heap.push(left);
    heap.push(right);
  }

  out.value = total;
  out.abs_error = total_err;
  out.l1 = total_l1;
  out.panels = panels;
  out.converged = total_err <= tolerance();
  return out;
}

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opt) {
  return run_adaptive<double, Result>(f, a, b, opt);
}

ResultC integrate_complex(const std::function<Complex(double)>& f,
                          double a, double b, const Options& opt) {
  return run_adaptive<Complex, ResultC>(f, a, b, opt);
}

double integrate_or_throw(const std::function<double(double)>& f, double a,
                          double b, const Options& opt, const char* what) {
  Result r = integrate(f, a, b, opt);
  if (!r.converged)
    throw quadrature_error(std::string(what) +
                           ": quadrature error estimate " +
                           std::to_string(r.abs_error) + " exceeds tolerance");
  return r.value;
}

Result integrate_positive_axis(const std::function<double(double)>& f,
                               const Options& opt, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) scale = 1.0;
  Options half = opt;
  half.abs_tol = 0.5 * opt.abs_tol;

  // [0, scale] directly; [scale, inf) via x = scale/u, dx = -scale/u^2 du.
  Result lo = integrate([&](double x) { return f(x); }, 0.0, scale, half);
  Result hi = integrate(
      [&](double u) {
        const double x = scale / u;
        return f(x) * scale / (u * u);
      },
      0.0, 1.0, half);

  Result out;
  out.value = lo.value + hi.value;
  out.abs_error = lo.abs_error + hi.abs_error;
  out.l1 = lo.l1 + hi.l1;
  out.panels = lo.panels + hi.panels;
  out.converged = lo.converged && hi.converged;
  return out;
}

namespace {

template <typename T, typename R>
R run_real_line(const std::function<T(double)>& f, const Options& opt,
                double w0, double wmax) {
  R out;
  Options seg = opt;
  seg.abs_tol = std::max(opt.abs_tol * 0.25, 0.0);

  R core = run_adaptive<T, R>(f, -w0, w0, seg);
  out.value = core.value;
  out.abs_error = core.abs_error;
  out.l1 = core.l1;
  out.panels = core.panels;

  double lo = w0;
  bool tail_done = false;
  while (lo < wmax) {
    const double hi = std::min(wmax, lo * 2.0);
    R right = run_adaptive<T, R>(f, lo, hi, seg);
    R left = run_adaptive<T, R>(f, -hi, -lo, seg);
    out.value += right.value + left.value;
    out.abs_error += right.abs_error + left.abs_error;
    out.l1 += right.l1 + left.l1;
    out.panels += right.panels + left.panels;

    const double shell = std::abs(right.value) + std::abs(left.value) +
                         right.abs_error + left.abs_error;
    const double target =
        std::max(opt.abs_tol, opt.rel_tol * std::abs(out.value));
    if (shell < 0.1 * std::max(target, 1e-300)) {
      tail_done = true;
      break;
    }
    lo = hi;
  }
  const double target =
      std::max(opt.abs_tol, opt.rel_tol * std::abs(out.value));
  out.converged = (tail_done || lo >= wmax) && out.abs_error <= 4.0 * target;
  return out;
}

}  // namespace

Result integrate_real_line(const std::function<double(double)>& f,
                           const Options& opt, double initial_halfwidth,
                           double max_halfwidth) {
  return run_real_line<double, Result>(f, opt, initial_halfwidth,
                                       max_halfwidth);
}

ResultC integrate_real_line_complex(const std::function<Complex(double)>& f,
                                    const Options& opt,
                                    double initial_halfwidth,
                                    double max_halfwidth) {
  return run_real_line<Complex, ResultC>(f, opt, initial_halfwidth,
                                         max_halfwidth);
}

}  // namespace quad
}  // namespace mellinstop
