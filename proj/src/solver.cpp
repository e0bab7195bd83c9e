#include "langest/solver.hpp"

#include <cmath>

#include "langest/errors.hpp"

namespace langest {

ZeroStartRecursion::ZeroStartRecursion(double theta, double dt)
    : theta_(theta), half_dt_(0.5 * dt), decay_(std::exp(-theta * dt)) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("theta must be positive");
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
}

double ZeroStartRecursion::start(double g0) {
  integral_ = 0.0;
  g_prev_ = g0;
  return g0;
}

double ZeroStartRecursion::step(double g_next) {
  integral_ = decay_ * integral_ + half_dt_ * (decay_ * g_prev_ + g_next);
  g_prev_ = g_next;
  return g_next - theta_ * integral_;
}

std::vector<double> solve_zero_start(std::span<const double> noise, double dt, double theta) {
  ZeroStartRecursion rec(theta, dt);
  std::vector<double> x(noise.size());
  if (noise.empty()) return x;
  x[0] = rec.start(noise[0]);
  for (std::size_t k = 1; k < noise.size(); ++k) x[k] = rec.step(noise[k]);
  return x;
}

PathSample solve_zero_start(const PathSample& noise, double theta) {
  if (noise.kind != PathKind::noise) throw DomainError("solve_zero_start needs a noise path");
  PathSample out = noise;
  out.values = solve_zero_start(noise.values, noise.grid.dt, theta);
  out.theta = theta;
  out.kind = PathKind::zero_start;
  return out;
}

PathSample shift_initial(const PathSample& x, double theta, double xi) {
  if (!(theta > 0.0)) throw DomainError("theta must be positive");
  PathSample out = x;
  if (xi == 0.0) return out;
  for (std::size_t k = 0; k < out.values.size(); ++k)
    out.values[k] += std::exp(-theta * x.grid.at(k)) * xi;
  return out;
}

}  // namespace langest
