#pragma once

#include "langest/noise_model.hpp"

namespace langest {

struct PsiDerivatives {
  double first = 0.0;   // psi'(theta) < 0
  double second = 0.0;  // psi''(theta) >= 0
};

/// Numeric machinery for one (model, theta): the stationary variance map psi,
/// its derivatives, the stationary autocovariance r and the zero-start
/// covariance gamma. Immutable after construction.
class KernelContext {
 public:
  KernelContext(NoiseModel model, double theta);

  const NoiseModel& model() const noexcept { return model_; }
  double theta() const noexcept { return theta_; }
  double psi() const noexcept { return psi_; }
  double psi_prime() const noexcept { return psi_prime_; }

  /// Stationary autocovariance r(t), t >= 0 (negative t is reflected).
  double r(double t) const;
  /// Covariance of the zero-start solution X at (t, s).
  double gamma(double t, double s) const;

 private:
  NoiseModel model_;
  double theta_;
  double psi_;
  double psi_prime_;
  double psi_quadrature_ = 0.0;  // quadrature psi, feeds the r quadrature
};

/// psi(theta) = (theta/2) int_0^inf e^{-theta t} v(t) dt, the variance of the
/// stationary solution. Closed forms for every built-in kind.
double psi(const KernelContext& ctx);
double psi_of(const NoiseModel& model, double theta);

/// psi by quadrature of (1/2) int_0^inf e^{-u} v(u/theta) du. Increment models only.
double psi_quadrature(const NoiseModel& model, double theta);

PsiDerivatives psi_derivatives(const KernelContext& ctx);
PsiDerivatives psi_derivatives_of(const NoiseModel& model, double theta);
/// Central differences on psi with step 1e-4 * theta.
PsiDerivatives psi_derivatives_finite_difference(const NoiseModel& model, double theta,
                                                 bool use_quadrature = true);

/// theta with psi(theta) = y, by bisection in log(theta) after geometric
/// bracket expansion from [1e-6, 1e6]. Throws EstimateOutOfRange when y is
/// not attainable.
double psi_inverse(const NoiseModel& model, double y);

double r_stationary(const KernelContext& ctx, double t);

/// r(t) for an increment model from the one-dimensional reduction
///   r(t) = 1/4 [ int_0^{theta t} e^{-x} (v(t+x/theta) + v(t-x/theta) - 2 v(t)) dx
///              + e^{-theta t} int_0^inf e^{-y} (v(2t + y/theta) - v(t)) dy
///              + (2 psi - v(t)) e^{-theta t} ].
double r_stationary_quadrature(const NoiseModel& model, double theta, double t);

/// r(t) for an increment model from the double integral
///   -int e^{-y} g(t, -y/theta) dy + int int e^{-x-y} g(t - x/theta, -y/theta) dx dy,
/// evaluated by nested quadrature split at the kinks of g. Slow; used as an
/// independent check of r_stationary_quadrature.
double r_double_quadrature(const NoiseModel& model, double theta, double t);

/// Stationary covariance of e^{-theta t} Y_{a(t)}, a(t) = (H'/theta) e^{theta t / H'},
/// for Y a bifractional Brownian motion B^{H,K} (H' = HK; K = 1 gives fBm).
double lamperti_r(double hurst, double kappa, double theta, double t);

/// 2^{-K} e^{-theta t} [ (a^{2H} + 1)^K - |a - 1|^{2HK} ] with a = H e^{t/H}.
/// Exposed for decay-rate comparison only; its value at t = 0 does not depend on theta.
double bifractional_appendix_formula(double hurst, double kappa, double theta, double t);

double gamma_cov(const KernelContext& ctx, double t, double s);

/// Large-t asymptote H(2H-1) theta^{-2} t^{2H-2} of the fractional OU autocovariance.
double fou_r_asymptote(double hurst, double theta, double t);

}  // namespace langest
