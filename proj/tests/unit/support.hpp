#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

// Small Monte Carlo helpers shared by the unit tests.
namespace testsupport {

struct Moments {
  double mean = 0.0;
  double var = 0.0;  // unbiased
  double se = 0.0;   // standard error of the mean
};

inline Moments moments(std::span<const double> x) {
  Moments m;
  const double n = static_cast<double>(x.size());
  for (double v : x) m.mean += v;
  m.mean /= n;
  for (double v : x) m.var += (v - m.mean) * (v - m.mean);
  m.var /= n - 1.0;
  m.se = std::sqrt(m.var / n);
  return m;
}

// Standard error of the sample variance of a normal sample: sqrt(2 / (n - 1)) var.
inline double variance_se(double var, std::size_t n) {
  return var * std::sqrt(2.0 / (static_cast<double>(n) - 1.0));
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace testsupport
