#include "langest/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "langest/errors.hpp"
#include "langest/numerics.hpp"

namespace langest {

namespace {

constexpr int kPanelOrder = 16;
constexpr int kFinestPanel = -12;  // first panel is [0, 2^-12 / theta]

struct Node {
  double t;
  double weight;
};

// Composite Gauss-Legendre rule on [a, b] with panel edges at 2^k / theta.
std::vector<Node> graded_rule(double theta, double a, double b) {
  std::vector<double> edges{a};
  const double unit = 1.0 / theta;
  for (int k = kFinestPanel;; ++k) {
    const double e = unit * std::ldexp(1.0, k);
    if (e >= b) break;
    if (e > a) edges.push_back(e);
  }
  edges.push_back(b);
  const auto ref = numerics::gauss_legendre(kPanelOrder);
  std::vector<Node> nodes;
  nodes.reserve((edges.size() - 1) * kPanelOrder);
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double half = 0.5 * (edges[p + 1] - edges[p]);
    const double mid = 0.5 * (edges[p + 1] + edges[p]);
    for (int i = 0; i < kPanelOrder; ++i)
      nodes.push_back({mid + half * ref.nodes[i], half * ref.weights[i]});
  }
  return nodes;
}

void require_horizon(double horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw DomainError("horizon T must be positive and finite");
}

// Components of r with an algebraic tail c t^{2H-2}: (H, c) pairs.
std::vector<std::pair<double, double>> algebraic_tail(const NoiseModel& model, double theta) {
  std::vector<std::pair<double, double>> out;
  const auto add = [&](const NoiseModel& m) {
    if (m.kind() == NoiseKind::fbm && m.hurst() != 0.5) {
      const double h = m.hurst();
      out.emplace_back(h, h * (2.0 * h - 1.0) / (theta * theta));
    }
  };
  if (model.kind() == NoiseKind::mixed)
    for (const auto& c : model.components()) add(c);
  else
    add(model);
  return out;
}

double max_fbm_hurst(const NoiseModel& model) {
  switch (model.kind()) {
    case NoiseKind::brownian:
      return 0.5;
    case NoiseKind::fbm:
      return model.hurst();
    case NoiseKind::mixed: {
      double h = 0.0;
      for (const auto& c : model.components()) h = std::max(h, max_fbm_hurst(c));
      return h;
    }
    default:
      return 0.5;
  }
}

double integrate_r_squared(const KernelContext& ctx, double a, double b) {
  double sum = 0.0;
  for (const auto& n : graded_rule(ctx.theta(), a, b)) {
    const double r = ctx.r(n.t);
    sum += n.weight * r * r;
  }
  return sum;
}

}  // namespace

TimeFunctionals time_functionals(const KernelContext& ctx, double horizon) {
  require_horizon(horizon);
  const auto nodes = graded_rule(ctx.theta(), 0.0, horizon);
  std::vector<double> sq(nodes.size()), ab(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double r = ctx.r(nodes[i].t);
    sq[i] = nodes[i].weight * r * r * (horizon - nodes[i].t);
    ab[i] = nodes[i].weight * std::abs(r);
  }
  TimeFunctionals f;
  f.horizon = horizon;
  f.w = 4.0 / (horizon * horizon) * numerics::pairwise_sum(sq);
  f.abs_r = numerics::pairwise_sum(ab);
  f.R = f.abs_r / (horizon * std::sqrt(f.w));
  return f;
}

double w_T(const KernelContext& ctx, double horizon) { return time_functionals(ctx, horizon).w; }

double R_T(const KernelContext& ctx, double horizon) { return time_functionals(ctx, horizon).R; }

double integral_r_squared(const KernelContext& ctx) {
  const double theta = ctx.theta();
  const double unit = 1.0 / theta;

  // Tail probe: r(t)^2 t must decay for the integral to converge.
  std::vector<double> log_t, log_f;
  bool negligible = true;
  for (double p : {1e2, 1e3, 1e4}) {
    const double t = p * unit;
    const double r = ctx.r(t);
    const double f = r * r * t;
    if (f >= 1e-30) negligible = false;
    log_t.push_back(std::log(t));
    log_f.push_back(std::log(std::max(f, 1e-300)));
  }
  if (!negligible) {
    const double slope = (log_f[2] - log_f[0]) / (log_t[2] - log_t[0]);
    if (slope >= -0.01) {
      std::ostringstream os;
      os << "r^2 is not integrable for " << ctx.model().describe() << " (tail slope of r^2 t is "
         << slope << ")";
      throw NonIntegrable(os.str());
    }
  }

  const auto tail = algebraic_tail(ctx.model(), theta);
  if (!tail.empty()) {
    // Quadrature to T*, then the exact integral of the squared asymptote.
    const double t_star = 1e3 * unit;
    double sum = integrate_r_squared(ctx, 0.0, t_star);
    for (const auto& [hi, ci] : tail) {
      for (const auto& [hj, cj] : tail) {
        const double e = 2.0 * hi + 2.0 * hj - 3.0;
        sum += ci * cj * std::pow(t_star, e) / (-e);
      }
    }
    return sum;
  }

  // Exponential decay: extend until the integrand is negligible.
  double end = 64.0 * unit;
  double sum = integrate_r_squared(ctx, 0.0, end);
  for (int i = 0; i < 20; ++i) {
    const double r = ctx.r(end);
    if (r * r * end <= 1e-14 * sum) break;
    sum += integrate_r_squared(ctx, end, 2.0 * end);
    end *= 2.0;
  }
  return sum;
}

double sigma2_classical(const KernelContext& ctx) {
  const double d = ctx.psi_prime();
  return 4.0 * integral_r_squared(ctx) / (d * d);
}

QMoments q_moments_exact(const KernelContext& ctx, double horizon, int order) {
  require_horizon(horizon);
  if (order < 2) throw DomainError("q_moments_exact needs order >= 2");

  // Exact r where it is cheap, a cubic spline on a fine lattice otherwise.
  std::function<double(double)> r;
  std::optional<boost::math::interpolators::cardinal_cubic_b_spline<double>> spline;
  if (ctx.model().kind() == NoiseKind::fbm || ctx.model().kind() == NoiseKind::mixed) {
    constexpr std::size_t lattice = 4096;
    const double h = horizon / lattice;
    std::vector<double> values(lattice + 1);
    for (std::size_t k = 0; k <= lattice; ++k) values[k] = ctx.r(h * static_cast<double>(k));
    spline.emplace(values.begin(), values.end(), 0.0, h);
    r = [&](double t) { return (*spline)(std::min(std::abs(t), horizon)); };
  } else {
    r = [&](double t) { return ctx.r(t); };
  }
  const double theta = ctx.theta();
  const double p = ctx.psi();
  const auto gamma = [&](double t, double s) {
    const double et = std::exp(-theta * t);
    const double es = std::exp(-theta * s);
    return r(t - s) + et * es * p - et * r(s) - es * r(t);
  };

  const auto outer = numerics::integrate_adaptive(
      [&](double t) {
        if (t == 0.0) return 0.0;
        const auto inner = numerics::integrate_adaptive(
            [&](double s) {
              const double g = gamma(t, s);
              return g * g;
            },
            0.0, t, 1e-10, 12);
        return inner.value;
      },
      0.0, horizon, 1e-9, 12);
  QMoments m;
  m.q2 = 4.0 / (horizon * horizon) * outer.value;

  const auto rule = numerics::gauss_legendre(order, 0.0, horizon);
  const auto n = static_cast<Eigen::Index>(order);
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = std::sqrt(rule.weights[i] * rule.weights[j]) *
                       gamma(rule.nodes[i], rule.nodes[j]);
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  const Eigen::MatrixXd a2 = a * a;
  const double cyclic = a2.cwiseProduct(a2).sum();  // trace(A^4) for symmetric A
  const double t4 = horizon * horizon * horizon * horizon;
  m.q4 = 3.0 * m.q2 * m.q2 + 24.0 * cyclic / t4;
  return m;
}

double fourth_moment_bound(double q2, double q4) {
  if (!(q2 > 0.0)) throw DomainError("fourth_moment_bound needs q2 > 0");
  const double c = 2.0 * std::sqrt(1.0 / 6.0);
  return c * std::sqrt(std::max(0.0, q4 / (q2 * q2) - 3.0));
}

std::string to_string(RateRegime regime) {
  switch (regime) {
    case RateRegime::classical:
      return "classical";
    case RateRegime::slow_polynomial:
      return "slow_polynomial";
    case RateRegime::log_rate:
      return "log_rate";
    case RateRegime::none:
      return "none";
  }
  return "unknown";
}

RateDescriptor rate_regime(const NoiseModel& model, double h) {
  switch (model.kind()) {
    case NoiseKind::lamperti_fbm:
    case NoiseKind::lamperti_bifbm:
      return {RateRegime::classical, 0.5, "exponentially decaying r: rate T^-1/2"};
    default:
      break;
  }
  if (h <= 0.5) return {RateRegime::classical, 0.5, "rate T^-1/2"};
  if (h < 0.75) {
    std::ostringstream os;
    os << "rate T^-" << (3.0 - 4.0 * h) / 2.0;
    return {RateRegime::slow_polynomial, (3.0 - 4.0 * h) / 2.0, os.str()};
  }
  if (h == 0.75) return {RateRegime::log_rate, 0.5, "rate (log T)^-1/2"};
  return {RateRegime::none, 0.0, "H > 3/4: no normal limit at this scaling"};
}

RateDescriptor rate_regime(const NoiseModel& model) {
  return rate_regime(model, max_fbm_hurst(model));
}

AsymptoticsReport asymptotics_report(const KernelContext& ctx, double horizon, bool with_moments,
                                     int moment_order) {
  AsymptoticsReport rep;
  const auto d = psi_derivatives(ctx);
  rep.psi = ctx.psi();
  rep.psi_prime = d.first;
  rep.psi_second = d.second;
  rep.horizon = horizon;
  const auto f = time_functionals(ctx, horizon);
  rep.w = f.w;
  rep.R = f.R;
  rep.be_bound = f.R;
  rep.rate = rate_regime(ctx.model());
  try {
    rep.sigma2_classical = sigma2_classical(ctx);
  } catch (const NonIntegrable&) {
    rep.sigma2_classical.reset();
  }
  if (with_moments) {
    rep.moments = q_moments_exact(ctx, horizon, moment_order);
    rep.fourth_moment_bound = fourth_moment_bound(rep.moments->q2, rep.moments->q4);
  }
  return rep;
}

double fou_sigma_h_squared(double hurst) {
  return integral_r_squared(KernelContext(NoiseModel::fbm(hurst), 1.0));
}

FouScalingCheck fou_sigma_scaling_check(double hurst, double theta) {
  FouScalingCheck c;
  c.direct = integral_r_squared(KernelContext(NoiseModel::fbm(hurst), theta));
  c.sigma_h2 = fou_sigma_h_squared(hurst);
  c.theta_pow_2h = std::pow(theta, -2.0 * hurst) * c.sigma_h2;
  c.self_similar = std::pow(theta, -4.0 * hurst - 1.0) * c.sigma_h2;
  return c;
}

}  // namespace langest
