#include "langest/numerics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "langest/errors.hpp"

namespace langest::numerics {

namespace {

// The rules extend their abscissa tables lazily, so each thread keeps its own.
boost::math::quadrature::exp_sinh<double>& exp_sinh_rule() {
  thread_local boost::math::quadrature::exp_sinh<double> rule(12);
  return rule;
}

boost::math::quadrature::tanh_sinh<double>& tanh_sinh_rule() {
  thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
  return rule;
}

// Boost reports non-finite integrand values by throwing; the integrands used
// here are finite by construction, so such a throw is a numerics failure.
template <class Fn>
QuadratureResult guarded(Fn&& run, const char* what) {
  try {
    return run();
  } catch (const langest::Error&) {
    throw;
  } catch (const std::exception& e) {
    throw NumericsError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

QuadratureResult integrate_half_line(const Integrand& f, double tol) {
  return guarded(
      [&] {
        QuadratureResult q;
        q.value = exp_sinh_rule().integrate(f, 0.0, std::numeric_limits<double>::infinity(),
                                            tol, &q.error, &q.l1);
        return q;
      },
      "exp-sinh quadrature");
}

QuadratureResult integrate_interval(const Integrand& f, double a, double b, double tol) {
  if (a == b) return {};
  return guarded(
      [&] {
        QuadratureResult q;
        // Integrate over [0, b - a]: the rule's endpoint guards are relative to
        // the limits and break down on short intervals far from the origin.
        const auto shifted = [&](double x) { return f(a + x); };
        q.value = tanh_sinh_rule().integrate(shifted, 0.0, b - a, tol, &q.error, &q.l1);
        return q;
      },
      "tanh-sinh quadrature");
}

QuadratureResult integrate_adaptive(const Integrand& f, double a, double b, double tol,
                                    unsigned max_depth) {
  if (a == b) return {};
  return guarded(
      [&] {
        QuadratureResult q;
        q.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            f, a, b, max_depth, tol, &q.error, &q.l1);
        return q;
      },
      "Gauss-Kronrod quadrature");
}

double checked(const QuadratureResult& q, double rel_tol, const char* what, double abs_floor) {
  if (!std::isfinite(q.value) || q.error > rel_tol * std::max(q.l1, abs_floor)) {
    throw NumericsError(std::string(what) + ": quadrature did not converge (error " +
                        std::to_string(q.error) + ", L1 " + std::to_string(q.l1) + ")");
  }
  return q.value;
}

GaussRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw DomainError("Gauss-Legendre rule needs n >= 1");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw DomainError("normal_quantile needs p in [0,1]");
  }
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 16) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double trapezoid(std::span<const double> values, double dt) {
  if (values.size() < 2) return 0.0;
  const double interior = pairwise_sum(values.subspan(1, values.size() - 2));
  return dt * (0.5 * (values.front() + values.back()) + interior);
}

}  // namespace langest::numerics
