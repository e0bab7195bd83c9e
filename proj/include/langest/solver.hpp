#pragma once

#include <span>
#include <vector>

#include "langest/sampler.hpp"

namespace langest {

/// Exponential-integrator state for X_t = G_t - theta I_t with
/// I_t = int_0^t e^{-theta (t - s)} G_s ds. Feeding the noise values one by
/// one reproduces solve_zero_start exactly, so a long path can be solved in
/// pieces.
class ZeroStartRecursion {
 public:
  ZeroStartRecursion(double theta, double dt);

  /// Start at t = 0 with G_0 = g0 (normally 0).
  double start(double g0);
  /// Advance one step to the next noise value; returns X at the new point.
  double step(double g_next);

  double integral() const noexcept { return integral_; }

 private:
  double theta_;
  double half_dt_;
  double decay_;
  double integral_ = 0.0;
  double g_prev_ = 0.0;
};

/// X from G by I_{k+1} = e^{-theta dt} I_k + (dt/2)(e^{-theta dt} G_k + G_{k+1}).
PathSample solve_zero_start(const PathSample& noise, double theta);

/// The same recursion on raw noise values.
std::vector<double> solve_zero_start(std::span<const double> noise, double dt, double theta);

/// x_t + e^{-theta t} xi: the solution started from xi.
PathSample shift_initial(const PathSample& x, double theta, double xi);

}  // namespace langest
