#pragma once

#include <optional>
#include <string>
#include <vector>

#include "langest/kernel.hpp"

namespace langest {

/// Integrals of r over [0, T] that feed the normal approximation.
struct TimeFunctionals {
  double horizon = 0.0;
  double w = 0.0;          // (4/T^2) int_0^T r(t)^2 (T - t) dt
  double abs_r = 0.0;      // int_0^T |r(t)| dt
  double R = 0.0;          // abs_r / (T sqrt(w))
};

/// Evaluates r once on a graded composite Gauss-Legendre rule over [0, T]
/// (panels doubling away from the origin in units of 1/theta) and forms w and R.
TimeFunctionals time_functionals(const KernelContext& ctx, double horizon);

double w_T(const KernelContext& ctx, double horizon);
double R_T(const KernelContext& ctx, double horizon);

/// int_0^inf r(t)^2 dt. Throws NonIntegrable when r(t)^2 t does not decay
/// along the probes t = 1e2/theta, 1e3/theta, 1e4/theta.
double integral_r_squared(const KernelContext& ctx);

/// 4 int_0^inf r^2 / psi'(theta)^2, the limit of T w_T / psi'^2.
double sigma2_classical(const KernelContext& ctx);

struct QMoments {
  double q2 = 0.0;  // E[Q_T^2]
  double q4 = 0.0;  // E[Q_T^4]
  double excess_kurtosis() const { return q4 / (q2 * q2) - 3.0; }
};

/// Moments of Q_T = (1/T) int_0^T (X_t^2 - E X_t^2) dt.
///
/// q2 = (4/T^2) int_0^T int_0^t gamma(t,s)^2 ds dt by nested adaptive
/// quadrature; q4 = 3 q2^2 + (24/T^4) int gamma gamma gamma gamma (cyclic),
/// the fourfold integral evaluated as trace((D Gamma D)^4) on an order-point
/// Gauss-Legendre rule, D = diag(sqrt(weights)).
QMoments q_moments_exact(const KernelContext& ctx, double horizon, int order = 64);

/// 2 sqrt((q-1)/(3q)) sqrt(E F^4 - 3) for the second chaos, F = Q/sqrt(q2).
double fourth_moment_bound(double q2, double q4);

enum class RateRegime { classical, slow_polynomial, log_rate, none };

std::string to_string(RateRegime regime);

struct RateDescriptor {
  RateRegime regime = RateRegime::classical;
  /// Berry-Esseen rate T^{-exponent}; for log_rate the rate is (log T)^{-exponent}.
  double exponent = 0.5;
  std::string description;
};

/// Regime from the effective Hurst index of the noise (exponential-decay
/// models are classical).
RateDescriptor rate_regime(const NoiseModel& model);
RateDescriptor rate_regime(const NoiseModel& model, double hurst_effective);

struct AsymptoticsReport {
  double psi = 0.0;
  double psi_prime = 0.0;
  double psi_second = 0.0;
  double horizon = 0.0;
  double w = 0.0;
  double R = 0.0;
  std::optional<double> sigma2_classical;
  RateDescriptor rate;
  double be_bound = 0.0;  // R_T at the given theta
  std::optional<QMoments> moments;
  std::optional<double> fourth_moment_bound;
};

AsymptoticsReport asymptotics_report(const KernelContext& ctx, double horizon,
                                     bool with_moments = false, int moment_order = 64);

/// int_0^inf r_{H,1}(t)^2 dt for the fractional OU process, H < 3/4.
double fou_sigma_h_squared(double hurst);

struct FouScalingCheck {
  double direct = 0.0;        // quadrature of r_{H,theta}^2
  double sigma_h2 = 0.0;      // quadrature at theta = 1
  double theta_pow_2h = 0.0;  // theta^{-2H} sigma_H^2
  double self_similar = 0.0;  // theta^{-4H-1} sigma_H^2
};

/// Compares int_0^inf r_{H,theta}^2 with the two candidate theta scalings.
FouScalingCheck fou_sigma_scaling_check(double hurst, double theta);

}  // namespace langest
