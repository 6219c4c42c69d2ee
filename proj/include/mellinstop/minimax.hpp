#pragma once

#include <utility>
#include <vector>

#include "mellinstop/processes.hpp"

namespace mellinstop {

/// q(x) = (sin(beta)/beta) / (1 + x^{pi/beta}); a probability density on R+.
double q_density(double beta_angle, double x);

/// M[q](z) = sin(beta)/sin(beta z) on 0 < Re(z) < pi/beta.
Complex q_mellin(double beta_angle, Complex z);

/// rho_M(x) = phi(ln x) sin(M ln x) / x (signed, integrates to 0).
double rho_density(double M, double x);

/// M[rho_M](z) = (e^{(z-1+iM)^2/2} - e^{(z-1-iM)^2/2}) / (2i); entire.
Complex rho_mellin(double M, Complex z);

/// The two-hypothesis construction f0 = q, f1 = q + delta (q ⊙ rho_M).
/// The convolution is evaluated by direct quadrature with log substitution
/// and cached on a fine ln-grid (cubic interpolation).
class AdversarialPair {
 public:
  /// delta found by halving from 0.5 until f1 >= 0 on a 2000-point log grid.
  static AdversarialPair make(double beta_angle, double M);
  /// Fixed delta (validated on the same grid; delta = 0 gives f1 = f0).
  static AdversarialPair make_with_delta(double beta_angle, double M,
                                         double delta);

  double beta_angle() const { return beta_; }
  double M() const { return m_; }
  double delta() const { return delta_; }

  double f0(double x) const { return q_density(beta_, x); }
  /// Throws std::domain_error if the value dips below the numeric floor
  /// (the pair needs a smaller delta).
  double f1(double x) const;
  /// (q ⊙ rho_M)(x) from the cache.
  double convolution(double x) const;

  /// (sup_x |f1 - f0|, argmax x) over a log grid.
  std::pair<double, double> sup_distance(int grid_points = 2000) const;

 private:
  AdversarialPair(double beta, double M);
  void build_table();
  bool nonnegative_on_grid(double delta) const;

  double beta_;
  double m_;
  double delta_ = 0.0;
  double u_lo_, u_hi_, u_step_;
  std::vector<double> psi_;  // (q ⊙ rho_M)(e^u) on the u-grid
};

/// chi^2(p1 | p0) = \int (p0 - p1)^2 / p0 dy for observations |Y_T| under the
/// two hypotheses, by octave-wise adaptive quadrature on [1e-4, X_max] where
/// X_max is grown until the known polynomial tail decay of the integrand
/// contributes under tol/10.
double chi2_divergence(const AdversarialPair& pair, const ProcessModel& process,
                       double tol);

}  // namespace mellinstop
