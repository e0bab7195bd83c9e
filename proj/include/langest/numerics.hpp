#pragma once

#include <functional>
#include <span>
#include <vector>

namespace langest::numerics {

using Integrand = std::function<double(double)>;

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  double l1 = 0.0;     // integral of |f|, for relative error checks
};

/// Double-exponential (exp-sinh) quadrature over [0, inf).
QuadratureResult integrate_half_line(const Integrand& f, double tol = 1e-12);

/// Double-exponential (tanh-sinh) quadrature over [a, b]; robust to algebraic
/// endpoint singularities.
QuadratureResult integrate_interval(const Integrand& f, double a, double b, double tol = 1e-12);

/// Adaptive 31-point Gauss-Kronrod quadrature over [a, b].
QuadratureResult integrate_adaptive(const Integrand& f, double a, double b, double tol = 1e-11,
                                    unsigned max_depth = 18);

/// Throws NumericsError unless error <= rel_tol * max(l1, abs_floor).
double checked(const QuadratureResult& q, double rel_tol, const char* what,
               double abs_floor = 0.0);

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [a, b].
GaussRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Standard normal CDF, via erfc.
double normal_cdf(double x);
/// Standard normal quantile.
double normal_quantile(double p);

/// Pairwise summation; result depends only on the order of the input.
double pairwise_sum(std::span<const double> values);

/// Trapezoidal integral of samples on a uniform grid with step dt.
double trapezoid(std::span<const double> values, double dt);

}  // namespace langest::numerics
