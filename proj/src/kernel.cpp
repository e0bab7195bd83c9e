#include "langest/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "langest/errors.hpp"
#include "langest/numerics.hpp"

namespace langest {

namespace {

// Beyond this many e-folds the exponential weight underflows.
constexpr double kExpCutoff = 745.0;
// Split point between the tanh-sinh head and the Gauss-Kronrod tail.
constexpr double kHeadLength = 40.0;

void require_theta(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    std::ostringstream os;
    os << "theta must be positive and finite, got " << theta;
    throw DomainError(os.str());
  }
}

void require_increment(const NoiseModel& model, const char* what) {
  if (model.flavor() != Flavor::increment)
    throw FlavorError(std::string(what) + " needs an increment-flavor model, got " +
                      model.describe());
}

double lamperti_log_d(double hurst, double kappa, double log_u) {
  // log of D(u) = (1 + u^{2H})^K - (1 - u)^{2HK}, u = e^{log_u} in (0, 1].
  const double u = std::exp(log_u);
  if (log_u < -30.0) {
    // D ~ K u^{2H} + 2HK u; both terms tiny, B ~ 0.
    const double l1 = std::log(kappa) + 2.0 * hurst * log_u;
    const double l2 = std::log(2.0 * hurst * kappa) + log_u;
    const double m = std::max(l1, l2);
    return m + std::log(std::exp(l1 - m) + std::exp(l2 - m));
  }
  const double a = kappa * std::log1p(std::exp(2.0 * hurst * log_u));
  if (u >= 1.0) return a;  // (1 - u)^{2HK} = 0 at t = 0
  const double b = 2.0 * hurst * kappa * std::log1p(-u);
  return b + std::log(std::expm1(a - b));
}

double psi_closed_form(const NoiseModel& model, double theta) {
  switch (model.kind()) {
    case NoiseKind::brownian:
      return 0.5 / theta;
    case NoiseKind::fbm: {
      const double h = model.hurst();
      return h * std::tgamma(2.0 * h) * std::pow(theta, -2.0 * h);
    }
    case NoiseKind::mixed: {
      double sum = 0.0;
      for (const auto& c : model.components()) sum += psi_closed_form(c, theta);
      return sum;
    }
    case NoiseKind::lamperti_fbm:
    case NoiseKind::lamperti_bifbm: {
      const double hp = model.self_similarity();
      return std::pow(hp / theta, 2.0 * hp);
    }
  }
  throw DomainError("unknown model kind");
}

PsiDerivatives psi_derivatives_closed_form(const NoiseModel& model, double theta) {
  switch (model.kind()) {
    case NoiseKind::brownian:
      return {-0.5 / (theta * theta), 1.0 / (theta * theta * theta)};
    case NoiseKind::fbm:
    case NoiseKind::lamperti_fbm:
    case NoiseKind::lamperti_bifbm: {
      // psi = c theta^{-2h} for every one of these kinds
      const double h = model.kind() == NoiseKind::fbm ? model.hurst() : model.self_similarity();
      const double p = psi_closed_form(model, theta);
      return {-2.0 * h * p / theta, 2.0 * h * (2.0 * h + 1.0) * p / (theta * theta)};
    }
    case NoiseKind::mixed: {
      PsiDerivatives d;
      for (const auto& c : model.components()) {
        const auto part = psi_derivatives_closed_form(c, theta);
        d.first += part.first;
        d.second += part.second;
      }
      return d;
    }
  }
  throw DomainError("unknown model kind");
}

// The one-dimensional reduction of r for increment models; p is psi(theta).
double r_reduced(const NoiseModel& model, double theta, double t, double p) {

  const double span = theta * t;
  const auto head = [&](double x) {
    const double w = std::exp(-x);
    return w == 0.0 ? 0.0 : w * v_second_difference(model, t, x / theta);
  };
  double i1 = 0.0;
  {
    const double end = std::min(span, kHeadLength);
    const auto q = numerics::integrate_interval(head, 0.0, end, 1e-12);
    i1 += numerics::checked(q, 1e-8, "r quadrature (near part)", p);
  }
  if (span > kHeadLength) {
    const auto q = numerics::integrate_adaptive(head, kHeadLength, std::min(span, kExpCutoff));
    i1 += q.value;
  }

  double i2 = 0.0;
  double boundary = 0.0;
  if (span < kExpCutoff) {
    const double decay = std::exp(-span);
    const double vt = eval_v(model, t);
    const auto q = numerics::integrate_half_line([&](double y) {
      const double w = std::exp(-y);
      return w == 0.0 ? 0.0 : w * (eval_v(model, 2.0 * t + y / theta) - vt);
    });
    i2 = decay * numerics::checked(q, 1e-8, "r quadrature (far part)");
    boundary = (2.0 * p - vt) * decay;
  }
  return 0.25 * (i1 + i2 + boundary);
}

}  // namespace

KernelContext::KernelContext(NoiseModel model, double theta)
    : model_(std::move(model)), theta_(theta) {
  require_theta(theta_);
  psi_ = psi_closed_form(model_, theta_);
  psi_prime_ = psi_derivatives_closed_form(model_, theta_).first;
  if (model_.kind() == NoiseKind::fbm || model_.kind() == NoiseKind::mixed)
    psi_quadrature_ = psi_quadrature(model_, theta_);
}

double KernelContext::r(double t) const {
  t = std::abs(t);
  switch (model_.kind()) {
    case NoiseKind::brownian:
      return std::exp(-theta_ * t) / (2.0 * theta_);
    case NoiseKind::fbm:
    case NoiseKind::mixed:
      return r_reduced(model_, theta_, t, psi_quadrature_);
    case NoiseKind::lamperti_fbm:
      return lamperti_r(model_.hurst(), 1.0, theta_, t);
    case NoiseKind::lamperti_bifbm:
      return lamperti_r(model_.hurst(), model_.kappa(), theta_, t);
  }
  throw DomainError("unknown model kind");
}

double KernelContext::gamma(double t, double s) const { return gamma_cov(*this, t, s); }

double psi(const KernelContext& ctx) { return ctx.psi(); }

double psi_of(const NoiseModel& model, double theta) {
  require_theta(theta);
  return psi_closed_form(model, theta);
}

double psi_quadrature(const NoiseModel& model, double theta) {
  require_theta(theta);
  require_increment(model, "psi_quadrature");
  const auto q = numerics::integrate_half_line([&](double u) {
    const double w = std::exp(-u);
    return w == 0.0 ? 0.0 : w * eval_v(model, u / theta);
  });
  return 0.5 * numerics::checked(q, 1e-8, "psi quadrature");
}

PsiDerivatives psi_derivatives(const KernelContext& ctx) {
  return psi_derivatives_closed_form(ctx.model(), ctx.theta());
}

PsiDerivatives psi_derivatives_of(const NoiseModel& model, double theta) {
  require_theta(theta);
  return psi_derivatives_closed_form(model, theta);
}

PsiDerivatives psi_derivatives_finite_difference(const NoiseModel& model, double theta,
                                                 bool use_quadrature) {
  require_theta(theta);
  const double h = 1e-4 * theta;
  const auto f = [&](double th) {
    return use_quadrature ? psi_quadrature(model, th) : psi_closed_form(model, th);
  };
  const double fm = f(theta - h);
  const double f0 = f(theta);
  const double fp = f(theta + h);
  return {(fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)};
}

double psi_inverse(const NoiseModel& model, double y) {
  const auto out_of_range = [&](double lo, double hi) {
    std::ostringstream os;
    os << "mean square " << y << " is outside the range of psi for " << model.describe();
    return EstimateOutOfRange(os.str(), y, psi_closed_form(model, lo),
                              psi_closed_form(model, hi));
  };
  double lo = 1e-6;
  double hi = 1e6;
  if (!(y > 0.0) || !std::isfinite(y)) throw out_of_range(lo, hi);

  // psi is decreasing: need psi(lo) >= y >= psi(hi).
  while (psi_closed_form(model, lo) < y) {
    if (lo <= 1e-12) throw out_of_range(lo, hi);
    lo = std::max(lo * 1e-2, 1e-12);
  }
  while (psi_closed_form(model, hi) > y) {
    if (hi >= 1e12) throw out_of_range(lo, hi);
    hi = std::min(hi * 1e2, 1e12);
  }

  double log_lo = std::log(lo);
  double log_hi = std::log(hi);
  for (int iter = 0; iter < 64; ++iter) {
    const double mid = 0.5 * (log_lo + log_hi);
    if (mid == log_lo || mid == log_hi) break;
    if (psi_closed_form(model, std::exp(mid)) > y)
      log_lo = mid;
    else
      log_hi = mid;
  }
  const double a = std::exp(log_lo);
  const double b = std::exp(log_hi);
  return std::abs(psi_closed_form(model, a) - y) <= std::abs(psi_closed_form(model, b) - y) ? a
                                                                                               : b;
}

double r_stationary(const KernelContext& ctx, double t) { return ctx.r(t); }

double r_stationary_quadrature(const NoiseModel& model, double theta, double t) {
  require_theta(theta);
  require_increment(model, "r_stationary_quadrature");
  return r_reduced(model, theta, std::abs(t), psi_quadrature(model, theta));
}

double r_double_quadrature(const NoiseModel& model, double theta, double t) {
  require_theta(theta);
  require_increment(model, "r_double_quadrature");
  t = std::abs(t);
  const double span = theta * t;

  const auto single = numerics::integrate_half_line([&](double y) {
    const double w = std::exp(-y);
    return w == 0.0 ? 0.0 : w * eval_g(model, t, -y / theta);
  });

  const auto inner = [&](double y) {
    const double s = -y / theta;
    const auto f = [&](double x) {
      const double w = std::exp(-x);
      return w == 0.0 ? 0.0 : w * eval_g(model, t - x / theta, s);
    };
    double sum = numerics::integrate_interval(f, 0.0, span, 1e-10).value;
    sum += numerics::integrate_interval(f, span, span + y, 1e-10).value;
    sum += numerics::integrate_half_line([&](double z) { return f(span + y + z); }, 1e-10).value;
    return sum;
  };
  const auto outer = numerics::integrate_half_line(
      [&](double y) {
        const double w = std::exp(-y);
        return w == 0.0 ? 0.0 : w * inner(y);
      },
      1e-9);
  return -single.value + outer.value;
}

double lamperti_r(double hurst, double kappa, double theta, double t) {
  require_theta(theta);
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("hurst must lie in (0,1)");
  if (!(kappa > 0.0 && kappa <= 1.0)) throw DomainError("kappa must lie in (0,1]");
  t = std::abs(t);
  const double hp = hurst * kappa;
  const double log_scale = 2.0 * hp * std::log(hp / theta) - kappa * std::log(2.0);
  const double log_u = -theta * t / hp;
  return std::exp(log_scale + theta * t + lamperti_log_d(hurst, kappa, log_u));
}

double bifractional_appendix_formula(double hurst, double kappa, double theta, double t) {
  require_theta(theta);
  const double a = hurst * std::exp(t / hurst);
  return std::pow(2.0, -kappa) * std::exp(-theta * t) *
         (std::pow(std::pow(a, 2.0 * hurst) + 1.0, kappa) -
          std::pow(std::abs(a - 1.0), 2.0 * hurst * kappa));
}

double gamma_cov(const KernelContext& ctx, double t, double s) {
  if (t < 0.0 || s < 0.0) throw DomainError("gamma_cov needs t, s >= 0");
  const double theta = ctx.theta();
  const double et = std::exp(-theta * t);
  const double es = std::exp(-theta * s);
  return ctx.r(t - s) + et * es * ctx.psi() - et * ctx.r(s) - es * ctx.r(t);
}

double fou_r_asymptote(double hurst, double theta, double t) {
  require_theta(theta);
  if (!(hurst > 0.0 && hurst < 1.0) || hurst == 0.5)
    throw DomainError("fou_r_asymptote needs H in (0,1) with H != 1/2");
  if (!(t > 0.0)) throw DomainError("fou_r_asymptote needs t > 0");
  return hurst * (2.0 * hurst - 1.0) / (theta * theta) * std::pow(t, 2.0 * hurst - 2.0);
}

}  // namespace langest
