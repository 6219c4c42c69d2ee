#include "mellinstop/minimax.hpp"

#include <algorithm>
#include <cmath>

#include "mellinstop/quadrature.hpp"
#include "mellinstop/warnings.hpp"

namespace mellinstop {

namespace {

void require_beta(double beta_angle, const char* what) {
  require_finite(beta_angle, what);
  if (!(beta_angle > 0.0 && beta_angle < kPi))
    throw std::invalid_argument(std::string(what) +
                                ": beta_angle must lie in (0, pi)");
}

double phi(double s) { return std::exp(-0.5 * s * s) / kSqrtTwoPi; }

}  // namespace

double q_density(double beta_angle, double x) {
  require_beta(beta_angle, "q_density");
  if (!(x > 0.0)) return x == 0.0 ? std::sin(beta_angle) / beta_angle : 0.0;
  return std::sin(beta_angle) / beta_angle /
         (1.0 + std::pow(x, kPi / beta_angle));
}

Complex q_mellin(double beta_angle, Complex z) {
  require_beta(beta_angle, "q_mellin");
  require_finite(z, "q_mellin");
  MellinStrip{0.0, kPi / beta_angle}.require(z.real(), "q_mellin");
  return std::sin(beta_angle) / std::sin(beta_angle * z);
}

double rho_density(double M, double x) {
  require_positive(M, "rho_density: M");
  if (!(x > 0.0)) return 0.0;
  const double lx = std::log(x);
  return phi(lx) * std::sin(M * lx) / x;
}

Complex rho_mellin(double M, Complex z) {
  require_positive(M, "rho_mellin: M");
  require_finite(z, "rho_mellin");
  const Complex a = z - 1.0 + Complex(0.0, M);
  const Complex b = z - 1.0 - Complex(0.0, M);
  return (std::exp(0.5 * a * a) - std::exp(0.5 * b * b)) / Complex(0.0, 2.0);
}

AdversarialPair::AdversarialPair(double beta, double M) : beta_(beta), m_(M) {
  require_beta(beta, "AdversarialPair");
  require_positive(M, "AdversarialPair: M");
  build_table();
}

void AdversarialPair::build_table() {
  // psi(t) = (q ⊙ rho_M)(t) = \int q(t e^{-s}) phi(s) e^{-s} sin(M s) ds,
  // tabulated on u = ln t.  The grid resolves the sin(M ln t) oscillation so
  // cubic interpolation stays ~1e-7 relative.
  u_lo_ = -30.0;
  u_hi_ = 30.0;
  u_step_ = std::min(0.025, 0.1 / std::max(1.0, m_));
  const std::size_t count =
      static_cast<std::size_t>(std::ceil((u_hi_ - u_lo_) / u_step_)) + 1;
  psi_.resize(count);

  quad::Options opt;
  opt.abs_tol = std::max(1e-16, 1e-9 * std::exp(-beta_ * m_));
  opt.rel_tol = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = std::exp(u_lo_ + u_step_ * static_cast<double>(i));
    quad::Result r = quad::integrate_real_line(
        [&](double s) {
          return q_density(beta_, t * std::exp(-s)) * phi(s) * std::exp(-s) *
                 std::sin(m_ * s);
        },
        opt, 2.0, 24.0);
    psi_[i] = r.value;
  }
}

double AdversarialPair::convolution(double x) const {
  require_positive(x, "AdversarialPair::convolution: x");
  const double u = std::log(x);
  if (u <= u_lo_ + u_step_ || u >= u_hi_ - 2.0 * u_step_) return 0.0;
  const double pos = (u - u_lo_) / u_step_;
  std::size_t j1 = static_cast<std::size_t>(pos);
  if (j1 == 0) j1 = 1;
  if (j1 + 2 >= psi_.size()) j1 = psi_.size() - 3;
  const std::size_t j0 = j1 - 1;
  const double t = pos - static_cast<double>(j0);
  const double l0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
  const double l1 = t * (t - 2.0) * (t - 3.0) / 2.0;
  const double l2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
  const double l3 = t * (t - 1.0) * (t - 2.0) / 6.0;
  return l0 * psi_[j0] + l1 * psi_[j0 + 1] + l2 * psi_[j0 + 2] +
         l3 * psi_[j0 + 3];
}

bool AdversarialPair::nonnegative_on_grid(double delta) const {
  for (int i = 0; i < 2000; ++i) {
    const double u = -10.0 + 20.0 * static_cast<double>(i) / 1999.0;
    const double x = std::exp(u);
    if (q_density(beta_, x) + delta * convolution(x) < 0.0) return false;
  }
  return true;
}

AdversarialPair AdversarialPair::make(double beta_angle, double M) {
  AdversarialPair pair(beta_angle, M);
  double delta = 0.5;
  while (!pair.nonnegative_on_grid(delta)) {
    delta *= 0.5;
    if (delta < 1e-12)
      throw std::runtime_error(
          "AdversarialPair: no admissible delta found (should not happen)");
  }
  pair.delta_ = delta;
  return pair;
}

AdversarialPair AdversarialPair::make_with_delta(double beta_angle, double M,
                                                 double delta) {
  require_finite(delta, "AdversarialPair: delta");
  if (delta < 0.0)
    throw std::invalid_argument("AdversarialPair: delta must be >= 0");
  AdversarialPair pair(beta_angle, M);
  if (delta > 0.0 && !pair.nonnegative_on_grid(delta))
    throw std::domain_error(
        "AdversarialPair: f1 negative on validation grid; use a smaller "
        "delta");
  pair.delta_ = delta;
  return pair;
}

double AdversarialPair::f1(double x) const {
  require_positive(x, "AdversarialPair::f1: x");
  const double base = f0(x);
  const double val = base + delta_ * convolution(x);
  if (val < -1e-12 * (base + 1e-300))
    throw std::domain_error(
        "AdversarialPair::f1: negative density value; use a smaller delta");
  return val;
}

std::pair<double, double> AdversarialPair::sup_distance(
    int grid_points) const {
  double best = 0.0, arg = 1.0;
  for (int i = 0; i < grid_points; ++i) {
    const double u =
        -10.0 + 20.0 * static_cast<double>(i) / (grid_points - 1.0);
    const double x = std::exp(u);
    const double diff = std::abs(delta_ * convolution(x));
    if (diff > best) {
      best = diff;
      arg = x;
    }
  }
  return {best, arg};
}

double chi2_divergence(const AdversarialPair& pair, const ProcessModel& process,
                       double tol) {
  if (tol < 0.0)
    throw std::invalid_argument("chi2_divergence: tol must be >= 0");
  if (process.family() != ProcessFamily::Bessel &&
      !(process.H() > 0.0 && process.H() < 2.0))
    warn("chi2_divergence: H outside (0,2); the lower-bound theory does not "
         "cover this scaling exponent");
  if (pair.delta() == 0.0) return 0.0;

  const double beta = pair.beta_angle();
  const double delta = pair.delta();
  // Inner mixtures: p0 to relative accuracy, the signed difference density
  // to an absolute floor tied to its e^{-M beta} scale.
  const double dp_scale = delta * std::exp(-beta * pair.M());
  auto p0 = [&](double y) {
    return stopped_density(
        process, [&](double t) { return pair.f0(t); }, y, 1e-300);
  };
  auto dp = [&](double y) {
    return delta * stopped_density(
                       process, [&](double t) { return pair.convolution(t); },
                       y, 1e-10 * dp_scale);
  };

  auto integrand = [&](double y) {
    const double base = p0(y);
    if (base < 1e-280) return 0.0;  // beyond any octave the tail rule keeps
    const double diff = dp(y);
    return diff * diff / base;
  };

  quad::Options opt;
  opt.abs_tol = 0.0;
  opt.rel_tol = 1e-7;

  double total = 0.0;
  double lo = 1e-4, hi = 0.25;
  // Integrand tail falls like y^{1 - 2 pi/beta} (observation-density decay),
  // so octave contributions shrink geometrically by r and the remainder after
  // the last octave is bounded by last * r / (1 - r).
  const double r = std::pow(2.0, 2.0 - 2.0 * kPi / beta);
  int octave = 0;
  for (;; ++octave) {
    quad::Result seg = quad::integrate(integrand, lo, hi, opt);
    total += seg.value;
    lo = hi;
    hi *= 2.0;
    if (octave >= 4 && lo >= 8.0) {
      const double tail_est =
          (r < 1.0) ? std::abs(seg.value) * r / (1.0 - r) : INFINITY;
      const double target = std::max(tol, 1e-6 * total);
      if (tail_est < 0.1 * std::max(target, 1e-300)) break;
    }
    if (hi > 1e9)
      throw quadrature_error(
          "chi2_divergence: tail did not meet the tolerance by X_max = 1e9");
  }
  return total;
}

}  // namespace mellinstop
