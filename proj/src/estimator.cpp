#include "langest/estimator.hpp"

#include <cmath>
#include <sstream>

#include "langest/asymptotics.hpp"
#include "langest/errors.hpp"
#include "langest/numerics.hpp"

namespace langest {

namespace {

EstimateResult from_mean_square(const char* method, double ms, double horizon,
                                const NoiseModel& model, const EstimateOptions& options) {
  if (!std::isfinite(ms)) throw DegenerateInput("mean square is not finite");
  if (ms == 0.0) throw DegenerateInput("path is identically zero");
  EstimateResult res;
  res.method = method;
  res.mean_square = ms;
  res.horizon = horizon;
  res.alpha = options.alpha;
  res.theta_hat = psi_inverse(model, ms);
  if (options.inference) {
    const KernelContext ctx(model, res.theta_hat);
    const auto f = time_functionals(ctx, horizon);
    const double se = std::sqrt(f.w) / std::abs(ctx.psi_prime());
    const double z = options.alpha >= 1.0 ? 0.0 : numerics::normal_quantile(1.0 - options.alpha / 2.0);
    res.std_error = se;
    res.ci = std::make_pair(res.theta_hat - z * se, res.theta_hat + z * se);
    res.be_rate = f.R;
  }
  return res;
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
}

}  // namespace

double mean_square(const PathSample& path) {
  if (path.values.size() < 2) throw DegenerateInput("path needs at least two points");
  std::vector<double> sq(path.values.size());
  for (std::size_t k = 0; k < sq.size(); ++k) sq[k] = path.values[k] * path.values[k];
  const double horizon = path.grid.dt * static_cast<double>(path.values.size() - 1);
  return numerics::trapezoid(sq, path.grid.dt) / horizon;
}

EstimateResult ae_continuous(const PathSample& path, const NoiseModel& model,
                             const EstimateOptions& options) {
  require_alpha(options.alpha);
  if (path.values.size() < 2) throw DegenerateInput("path needs at least two points");
  const double horizon = path.grid.dt * static_cast<double>(path.values.size() - 1);
  return from_mean_square("ae", mean_square(path), horizon, model, options);
}

EstimateResult ae_discrete(std::span<const double> observations, double delta,
                           const NoiseModel& model, const EstimateOptions& options) {
  require_alpha(options.alpha);
  if (observations.empty()) throw DegenerateInput("no observations");
  if (!(delta > 0.0)) throw DomainError("observation spacing must be positive");
  std::vector<double> sq(observations.size());
  for (std::size_t k = 0; k < sq.size(); ++k) sq[k] = observations[k] * observations[k] * delta;
  const double horizon = delta * static_cast<double>(observations.size());
  return from_mean_square("ae_discrete", numerics::pairwise_sum(sq) / horizon, horizon, model,
                          options);
}

EstimateResult sae(const PathSample& path, const NoiseModel& model,
                   const EstimateOptions& options) {
  if (path.kind != PathKind::stationary)
    throw DomainError("the stationary estimator needs a stationary path");
  auto res = ae_continuous(path, model, options);
  res.method = "sae";
  return res;
}

MeshCheck check_mesh(double hurst, double delta, double n, double mesh) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("hurst must lie in (0,1)");
  const double beta0 = (2.0 * hurst + 0.5) / (hurst + 0.5);
  if (!(delta > 0.0 && delta < beta0)) {
    std::ostringstream os;
    os << "delta must lie in (0, " << beta0 << ")";
    throw DomainError(os.str());
  }
  if (!(n >= 1.0) || !(mesh > 0.0)) throw DomainError("check_mesh needs N >= 1 and mesh > 0");
  MeshCheck c;
  c.beta = beta0 - delta;
  c.margin = std::log(n) + c.beta * std::log(mesh);
  c.ok = c.margin <= 0.0;
  return c;
}

double bias_expansion(const KernelContext& ctx, double horizon) {
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  const double theta = ctx.theta();
  const double p = ctx.psi();
  double integral = 0.0;
  if (ctx.model().kind() == NoiseKind::brownian) {
    integral = -std::expm1(-2.0 * theta * horizon) / (4.0 * theta * theta);
  } else {
    const auto q = numerics::integrate_adaptive(
        [&](double t) { return std::exp(-theta * t) * ctx.r(t); }, 0.0, horizon, 1e-10, 15);
    integral = q.value;
  }
  return (p * -std::expm1(-2.0 * theta * horizon) / (2.0 * theta) - 2.0 * integral) / horizon;
}

std::pair<double, double> confidence_interval(double theta_hat, const NoiseModel& model,
                                              double horizon, double alpha) {
  require_alpha(alpha);
  const KernelContext ctx(model, theta_hat);
  const double se = 1.0 / master_scale(ctx, horizon);
  const double z = alpha >= 1.0 ? 0.0 : numerics::normal_quantile(1.0 - alpha / 2.0);
  return {theta_hat - z * se, theta_hat + z * se};
}

double master_scale(const KernelContext& ctx, double horizon) {
  return std::abs(ctx.psi_prime()) / std::sqrt(w_T(ctx, horizon));
}

}  // namespace langest
